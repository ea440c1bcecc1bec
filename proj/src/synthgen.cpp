#include "mngl/synthgen.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace mngl {

namespace {

std::vector<int> base_cuts(int p, int k) {
    std::vector<int> b(static_cast<std::size_t>(k + 1));
    for (int i = 0; i <= k; ++i) b[i] = static_cast<int>(std::lround(static_cast<double>(p) * i / k));
    return b;
}

bool valid_cuts(const std::vector<int>& b) {
    for (std::size_t i = 1; i < b.size(); ++i)
        if (b[i] - b[i - 1] < 2) return false;
    return true;
}

}  // namespace

std::vector<int> GroundTruth::labels(int j) const {
    const auto& b = boundaries[static_cast<std::size_t>(j)];
    std::vector<int> out(static_cast<std::size_t>(b.back()));
    for (std::size_t c = 0; c + 1 < b.size(); ++c)
        for (int v = b[c]; v < b[c + 1]; ++v) out[static_cast<std::size_t>(v)] = static_cast<int>(c);
    return out;
}

Mat GroundTruth::node_theta(int j) const {
    const auto& H = Hs[static_cast<std::size_t>(j)];
    return H.transpose() * thetas[static_cast<std::size_t>(j)] * H;
}

GroundTruth generate_truth(int p, int k, int m, std::uint64_t seed, const GeneratorOptions& opt) {
    if (k < 1 || m < 1) throw GenerationError("generate_truth: need k >= 1 and m >= 1");
    if (p < 2 * k) throw GenerationError("generate_truth: need p >= 2k");
    if (!(opt.entry_lo > 0.0 && opt.entry_hi >= opt.entry_lo)) throw GenerationError("generate_truth: bad entry range");

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    std::uniform_real_distribution<double> mag(opt.entry_lo, opt.entry_hi);
    const auto base = base_cuts(p, k);
    const int width = std::max(1, (p / k) / 3);
    std::uniform_int_distribution<int> shift(-width, width);

    GroundTruth g;
    g.seed = seed;
    g.phi = Vec::Constant(m, 1.0 / m);
    for (int j = 0; j < m; ++j) {
        std::vector<int> b = base;
        if (k > 1) {
            bool ok = false;
            for (int attempt = 0; attempt < 1000 && !ok; ++attempt) {
                b = base;
                for (int c = 1; c < k; ++c) b[c] += shift(rng);
                ok = valid_cuts(b) && std::none_of(g.boundaries.begin(), g.boundaries.end(),
                                                   [&](const auto& o) { return o == b; });
            }
            if (!ok) throw GenerationError("generate_truth: cannot draw distinct block sizes");
        }
        g.boundaries.push_back(b);
        const auto lab = g.labels(j);

        Eigen::MatrixXi link = Eigen::MatrixXi::Zero(k, k);
        if (k > 1) {
            int active = 0;
            for (int a = 0; a < k; ++a)
                for (int c = a + 1; c < k; ++c)
                    if (u01(rng) < opt.block_link_prob) link(a, c) = link(c, a) = 1, ++active;
            if (active == 0) {
                std::uniform_int_distribution<int> pick(0, k - 1);
                int a = pick(rng), c = pick(rng);
                while (c == a) c = pick(rng);
                link(a, c) = link(c, a) = 1;
            }
        }

        auto draw = [&] {
            double v = mag(rng);
            if (opt.sign == EntrySign::Negative) return -v;
            return u01(rng) < 0.5 ? -v : v;
        };
        Mat T = Mat::Zero(p, p);
        Eigen::MatrixXi filled = Eigen::MatrixXi::Zero(k, k);
        for (int a = 0; a < p; ++a)
            for (int c = a + 1; c < p; ++c) {
                const int la = lab[a], lc = lab[c];
                const bool same = la == lc;
                if (!same && !link(la, lc)) continue;
                if (u01(rng) < (same ? opt.within_density : opt.cross_density)) {
                    T(a, c) = T(c, a) = draw();
                    ++filled(la, lc);
                }
            }
        for (int a = 0; a < k; ++a)
            for (int c = a + 1; c < k; ++c) {
                if (!link(a, c) || filled(a, c) + filled(c, a) > 0) continue;
                std::uniform_int_distribution<int> va(b[a], b[a + 1] - 1), vc(b[c], b[c + 1] - 1);
                const int x = va(rng), y = vc(rng);
                T(x, y) = T(y, x) = draw();
            }
        Eigen::SelfAdjointEigenSolver<Mat> es(T, Eigen::EigenvaluesOnly);
        T.diagonal().array() += std::abs(es.eigenvalues().minCoeff()) + opt.pd_margin;

        Mat H = Mat::Zero(p, k);
        for (int v = 0; v < p; ++v) H(v, lab[v]) = 1.0;
        g.thetas.push_back(std::move(T));
        g.Hs.push_back(std::move(H));
    }
    return g;
}

Sample sample(const GroundTruth& truth, int n, double sigma, std::uint64_t seed) {
    if (n < 1) throw ValueError("sample: n must be >= 1");
    if (!(sigma >= 0.0)) throw ValueError("sample: sigma must be >= 0");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    std::normal_distribution<double> normal(0.0, 1.0);
    const int m = truth.m(), p = truth.p();

    Sample s;
    s.labels.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        double t = u01(rng), acc = 0.0;
        int j = m - 1;
        for (int c = 0; c < m; ++c) {
            acc += truth.phi(c);
            if (t < acc) {
                j = c;
                break;
            }
        }
        s.labels[static_cast<std::size_t>(i)] = j;
    }

    s.X.resize(n, p);
    std::vector<Eigen::LLT<Mat>> chol;
    for (const auto& T : truth.thetas) {
        chol.emplace_back(T);
        if (chol.back().info() != Eigen::Success) throw DefinitenessError("sample: truth precision not PD");
    }
    Vec e(p);
    for (int i = 0; i < n; ++i) {
        for (int v = 0; v < p; ++v) e(v) = normal(rng);
        // theta = L L^T, so x = L^{-T} e has covariance theta^{-1}
        s.X.row(i) = chol[static_cast<std::size_t>(s.labels[static_cast<std::size_t>(i)])].matrixU().solve(e).transpose();
    }
    if (sigma > 0.0)
        for (int i = 0; i < n; ++i)
            for (int v = 0; v < p; ++v) s.X(i, v) += sigma * normal(rng);
    return s;
}

void ScenarioSpec::validate() const {
    if (repeats < 1) throw ValueError("scenario: repeats must be >= 1");
    if (sweep.empty()) throw ValueError("scenario: empty sweep");
    if (n < 1 || p < 2 || k < 1 || m < 1 || sigma < 0.0) throw ValueError("scenario: invalid fixed values");
    for (double v : sweep) {
        const bool integral = id != ScenarioId::S2;
        if (integral && (v < 1.0 || v != std::floor(v))) throw ValueError("scenario: swept value must be a positive integer");
        if (!integral && v < 0.0) throw ValueError("scenario: sigma must be >= 0");
    }
}

ScenarioSpec default_scenario(ScenarioId id) {
    ScenarioSpec s;
    s.id = id;
    switch (id) {
        case ScenarioId::S1: s.sweep = {200, 650, 1100, 1550, 2000}; break;
        case ScenarioId::S2: s.sweep = {2, 3, 4, 5}; break;
        case ScenarioId::S3: s.sweep = {70, 140, 210, 280, 350}; break;
        case ScenarioId::S4: s.sweep = {3, 5, 7, 9, 11}; break;
    }
    return s;
}

ScenarioId parse_scenario(const std::string& s) {
    if (s == "s1" || s == "S1") return ScenarioId::S1;
    if (s == "s2" || s == "S2") return ScenarioId::S2;
    if (s == "s3" || s == "S3") return ScenarioId::S3;
    if (s == "s4" || s == "S4") return ScenarioId::S4;
    throw ValueError("unknown scenario '" + s + "'");
}

std::string scenario_name(ScenarioId id) {
    switch (id) {
        case ScenarioId::S1: return "s1";
        case ScenarioId::S2: return "s2";
        case ScenarioId::S3: return "s3";
        case ScenarioId::S4: return "s4";
    }
    return "?";
}

std::string swept_parameter(ScenarioId id) {
    switch (id) {
        case ScenarioId::S1: return "n";
        case ScenarioId::S2: return "sigma";
        case ScenarioId::S3: return "p";
        case ScenarioId::S4: return "k";
    }
    return "?";
}

std::vector<InstanceSpec> scenario_instances(const ScenarioSpec& spec) {
    spec.validate();
    std::vector<InstanceSpec> out;
    int index = 0;
    for (std::size_t s = 0; s < spec.sweep.size(); ++s)
        for (int r = 0; r < spec.repeats; ++r) {
            InstanceSpec inst;
            inst.index = index++;
            inst.sweep_index = static_cast<int>(s);
            inst.repeat = r;
            inst.swept_value = spec.sweep[s];
            inst.n = spec.n;
            inst.p = spec.p;
            inst.k = spec.k;
            inst.m = spec.m;
            inst.sigma = spec.sigma;
            const int v = static_cast<int>(spec.sweep[s]);
            switch (spec.id) {
                case ScenarioId::S1: inst.n = v; break;
                case ScenarioId::S2: inst.sigma = spec.sweep[s]; break;
                case ScenarioId::S3: inst.p = v; break;
                case ScenarioId::S4: inst.k = v; break;
            }
            inst.seed = derive_seed(spec.seed, s + 1, static_cast<std::uint64_t>(r));
            out.push_back(inst);
        }
    return out;
}

Instance make_instance(const InstanceSpec& inst, const GeneratorOptions& options) {
    Instance out;
    out.spec = inst;
    out.truth = generate_truth(inst.p, inst.k, inst.m, derive_seed(inst.seed, 1), options);
    out.data = sample(out.truth, inst.n, inst.sigma, derive_seed(inst.seed, 2));
    return out;
}

void for_each_instance(const ScenarioSpec& spec, const std::function<void(const Instance&)>& fn) {
    for (const auto& inst : scenario_instances(spec)) fn(make_instance(inst, spec.generator));
}

}  // namespace mngl

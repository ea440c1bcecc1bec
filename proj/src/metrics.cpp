#include "mngl/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>

namespace mngl {

namespace {

// Contingency table of two labelings with labels compressed to 0..r-1.
Mat contingency(const std::vector<int>& a, const std::vector<int>& b) {
    if (a.size() != b.size()) throw ShapeError("label vectors differ in length");
    if (a.empty()) throw ShapeError("empty label vectors");
    std::map<int, int> ia, ib;
    for (int x : a) ia.emplace(x, 0);
    for (int x : b) ib.emplace(x, 0);
    int c = 0;
    for (auto& kv : ia) kv.second = c++;
    c = 0;
    for (auto& kv : ib) kv.second = c++;
    Mat t = Mat::Zero(static_cast<Eigen::Index>(ia.size()), static_cast<Eigen::Index>(ib.size()));
    for (std::size_t i = 0; i < a.size(); ++i) t(ia[a[i]], ib[b[i]]) += 1.0;
    return t;
}

double entropy(const Vec& counts, double n) {
    double h = 0.0;
    for (Eigen::Index i = 0; i < counts.size(); ++i)
        if (counts(i) > 0.0) h -= counts(i) / n * std::log(counts(i) / n);
    return h;
}

std::vector<int> argmax_labels(const Mat& H) {
    std::vector<int> out(static_cast<std::size_t>(H.rows()));
    for (Eigen::Index v = 0; v < H.rows(); ++v) {
        int best = 0;
        for (Eigen::Index c = 1; c < H.cols(); ++c)
            if (H(v, c) > H(v, best)) best = static_cast<int>(c);
        out[static_cast<std::size_t>(v)] = best;
    }
    return out;
}

}  // namespace

EdgeScore edge_score(const EdgeSet& detected, const EdgeSet& truth) {
    if (truth.empty()) throw ValueError("edge_score: accuracy undefined for an empty truth edge set");
    EdgeScore s;
    s.n_g = static_cast<int>(truth.size());
    s.n_a = static_cast<int>(detected.size());
    for (const auto& e : detected) s.n_d += truth.count(e) ? 1 : 0;
    s.accuracy = static_cast<double>(s.n_d) / s.n_g;
    if (s.n_d > 0) {
        const double nd = s.n_d;
        s.f1 = 2.0 * nd * nd / (s.n_a * nd + s.n_g * nd);
    }
    return s;
}

double purity(const std::vector<int>& pred, const std::vector<int>& truth) {
    const Mat t = contingency(pred, truth);
    return t.rowwise().maxCoeff().sum() / static_cast<double>(pred.size());
}

double nmi(const std::vector<int>& pred, const std::vector<int>& truth) {
    const Mat t = contingency(pred, truth);
    const double n = static_cast<double>(pred.size());
    const Vec ra = t.rowwise().sum(), cb = t.colwise().sum().transpose();
    const double ha = entropy(ra, n), hb = entropy(cb, n);
    if (ha <= 0.0 || hb <= 0.0) return 0.0;
    double mi = 0.0;
    for (Eigen::Index i = 0; i < t.rows(); ++i)
        for (Eigen::Index j = 0; j < t.cols(); ++j)
            if (t(i, j) > 0.0) mi += t(i, j) / n * std::log(t(i, j) * n / (ra(i) * cb(j)));
    return std::clamp(mi / std::sqrt(ha * hb), 0.0, 1.0);
}

std::vector<int> max_assignment(const Mat& weight) {
    const int n = static_cast<int>(weight.rows());
    if (weight.cols() != n) throw ShapeError("max_assignment: matrix must be square");
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
    std::vector<int> p(n + 1, 0), way(n + 1, 0);
    for (int i = 1; i <= n; ++i) {
        p[0] = i;
        int j0 = 0;
        std::vector<double> minv(n + 1, inf);
        std::vector<bool> used(n + 1, false);
        do {
            used[j0] = true;
            const int i0 = p[j0];
            double delta = inf;
            int j1 = 0;
            for (int j = 1; j <= n; ++j) {
                if (used[j]) continue;
                const double cur = -weight(i0 - 1, j - 1) - u[i0] - v[j];
                if (cur < minv[j]) minv[j] = cur, way[j] = j0;
                if (minv[j] < delta) delta = minv[j], j1 = j;
            }
            for (int j = 0; j <= n; ++j) {
                if (used[j]) u[p[j]] += delta, v[j] -= delta;
                else minv[j] -= delta;
            }
            j0 = j1;
        } while (p[j0] != 0);
        do {
            const int j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
        } while (j0);
    }
    std::vector<int> col(static_cast<std::size_t>(n));
    for (int j = 1; j <= n; ++j) col[static_cast<std::size_t>(p[j] - 1)] = j - 1;
    return col;
}

std::vector<int> match_nodes(const std::vector<int>& pred, const std::vector<int>& truth, int k) {
    if (pred.size() != truth.size()) throw ShapeError("match_nodes: length mismatch");
    Mat c = Mat::Zero(k, k);
    for (std::size_t i = 0; i < pred.size(); ++i) c(pred[i], truth[i]) += 1.0;
    return max_assignment(c);
}

Estimate estimate_from_state(const MixtureState& state, const Mat& responsibilities) {
    Estimate e;
    for (const auto& c : state.components) {
        e.H.push_back(c.H);
        e.theta.push_back(c.theta);
    }
    if (responsibilities.size()) {
        e.assignment.resize(static_cast<std::size_t>(responsibilities.rows()));
        for (Eigen::Index i = 0; i < responsibilities.rows(); ++i) {
            Eigen::Index j;
            responsibilities.row(i).maxCoeff(&j);
            e.assignment[static_cast<std::size_t>(i)] = static_cast<int>(j);
        }
    }
    return e;
}

Estimate estimate_from_pipeline(const PipelineResult& result) {
    Estimate e;
    e.assignment = result.assignment;
    for (const auto& s : result.cgl) {
        e.H.push_back(s.H);
        e.theta.push_back(s.theta);
    }
    for (const auto& s : result.onmtf) {
        e.H.push_back(s.H);
        e.theta.push_back(s.S_mid);
    }
    return e;
}

ComponentScore score_component(const Mat& H, const Mat& theta, const GroundTruth& truth, int j, double edge_threshold) {
    const int k = truth.k();
    if (H.cols() != k || theta.rows() != k) throw ShapeError("score: estimated k differs from truth");
    ComponentScore s;
    s.truth_index = j;
    const auto pred = argmax_labels(H);
    const auto tl = truth.labels(j);
    s.cluster.nmi = nmi(pred, tl);
    s.cluster.purity = purity(pred, tl);
    const auto map = match_nodes(pred, tl, k);
    EdgeSet detected;
    for (const auto& [a, b] : edge_set(theta, edge_threshold)) {
        const int x = map[static_cast<std::size_t>(a)], y = map[static_cast<std::size_t>(b)];
        detected.emplace(std::min(x, y), std::max(x, y));
    }
    s.edges = edge_score(detected, edge_set(truth.node_theta(j), 1e-8));
    return s;
}

std::vector<int> align_components(const Estimate& est, const GroundTruth& truth, double edge_threshold) {
    const int m = truth.m();
    if (static_cast<int>(est.H.size()) != m) throw ShapeError("align: component counts differ");
    std::vector<std::vector<ComponentScore>> table(static_cast<std::size_t>(m));
    for (int a = 0; a < m; ++a)
        for (int b = 0; b < m; ++b)
            table[a].push_back(score_component(est.H[a], est.theta[a], truth, b, edge_threshold));

    std::vector<int> perm(static_cast<std::size_t>(m));
    std::iota(perm.begin(), perm.end(), 0);
    if (m > 8) {
        Mat w(m, m);
        for (int a = 0; a < m; ++a)
            for (int b = 0; b < m; ++b) w(a, b) = table[a][b].edges.f1 + 1e-6 * table[a][b].cluster.nmi;
        return max_assignment(w);
    }
    std::vector<int> best = perm;
    double best_f1 = -1.0, best_nmi = -1.0;
    do {
        double f1 = 0.0, nm = 0.0;
        for (int a = 0; a < m; ++a) {
            f1 += table[a][perm[a]].edges.f1;
            nm += table[a][perm[a]].cluster.nmi;
        }
        // sums of the same scores in another order may differ in the last bit
        constexpr double eps = 1e-12;
        if (f1 > best_f1 + eps || (std::abs(f1 - best_f1) <= eps && nm > best_nmi + eps)) {
            best_f1 = f1;
            best_nmi = nm;
            best = perm;
        }
    } while (std::next_permutation(perm.begin(), perm.end()));
    return best;
}

RunScore score_run(const Estimate& est, const GroundTruth& truth, const std::vector<int>& labels, double edge_threshold) {
    RunScore rs;
    rs.permutation = align_components(est, truth, edge_threshold);
    const int m = truth.m();
    for (int j = 0; j < m; ++j) {
        rs.components.push_back(
            score_component(est.H[j], est.theta[j], truth, rs.permutation[static_cast<std::size_t>(j)], edge_threshold));
        const auto& c = rs.components.back();
        rs.accuracy += c.edges.accuracy / m;
        rs.f1 += c.edges.f1 / m;
        rs.nmi += c.cluster.nmi / m;
        rs.purity += c.cluster.purity / m;
    }
    rs.state_nmi = std::numeric_limits<double>::quiet_NaN();
    if (!est.assignment.empty() && est.assignment.size() == labels.size()) rs.state_nmi = nmi(est.assignment, labels);
    return rs;
}

}  // namespace mngl

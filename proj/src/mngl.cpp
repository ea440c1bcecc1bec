#include "mngl/mngl.hpp"

#include "mngl/kmeans.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>

namespace mngl {

namespace {

bool full_solve(const MnglConfig& config) { return config.solve_to_convergence || config.m == 1; }

CglOptions cgl_options(const MnglConfig& config) {
    CglOptions o;
    o.update_h = config.update_h;
    return o;
}

void draw_responsibility_column(Mat& r, Eigen::Index j, int m, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const double lo = 0.1 / (m - 1);
    for (Eigen::Index i = 0; i < r.rows(); ++i) r(i, j) = u(rng) < 1.0 / m ? 0.9 : lo;
    for (Eigen::Index i = 0; i < r.rows(); ++i) r.row(i) /= r.row(i).sum();
}

bool theta_less(const Component& a, const Component& b) {
    const auto n = a.theta.size();
    for (Eigen::Index i = 0; i < n; ++i) {
        const double x = a.theta.data()[i], y = b.theta.data()[i];
        if (x != y) return x < y;
    }
    return false;
}

}  // namespace

void MnglConfig::validate() const {
    settings.validate();
    if (m < 1 || k < 1) throw ValueError("mngl: need m >= 1 and k >= 1");
    if (max_restarts < 0) throw ValueError("mngl: max_restarts must be >= 0");
    if (!(empty_fraction >= 0.0 && empty_fraction < 1.0)) throw ValueError("mngl: empty_fraction must be in [0,1)");
}

Mat e_step(const Mat& X, const MixtureState& state, int* underflow_rows) {
    const Mat lp = component_log_densities(X, state);
    const auto m = lp.cols();
    Mat r(lp.rows(), m);
    for (Eigen::Index i = 0; i < lp.rows(); ++i) {
        const double mx = lp.row(i).maxCoeff();
        if (!std::isfinite(mx)) {
            r.row(i).setConstant(1.0 / static_cast<double>(m));
            if (underflow_rows) ++*underflow_rows;
            continue;
        }
        const Eigen::RowVectorXd w = (lp.row(i).array() - mx).exp().matrix();
        r.row(i) = w / w.sum();
    }
    return r;
}

Vec m_step_phi(const Mat& r) {
    if (r.rows() < 1) throw ShapeError("m_step_phi: empty responsibilities");
    return r.colwise().mean().transpose();
}

Component m_step_component(const Mat& X, const Vec& r_col, const Component& comp, const MnglConfig& config,
                           bool* converged) {
    const Mat S = weighted_covariance(X, r_col);
    Component out = comp;
    const int k = static_cast<int>(comp.theta.rows());
    if (full_solve(config)) {
        CglSolution sol = cgl_solve_cov(S, k, config.settings, comp.H, nullptr, cgl_options(config));
        out.H = std::move(sol.H);
        out.theta = std::move(sol.theta);
        if (converged) *converged = true;
        return out;
    }
    SolverSettings one = config.settings;
    one.max_outer_iters = 1;
    CglSolution sol = cgl_solve_cov(S, k, one, comp.H, nullptr, cgl_options(config));
    const double dH = (sol.H - comp.H).cwiseAbs().maxCoeff();
    const double dT = (sol.theta - comp.theta).cwiseAbs().maxCoeff();
    if (converged) *converged = dH < config.settings.tol && dT < config.settings.tol;
    out.H = std::move(sol.H);
    out.theta = std::move(sol.theta);
    return out;
}

MixtureState m_step_networks(const Mat& X, const Mat& r, const MixtureState& state, const MnglConfig& config) {
    if (r.cols() != static_cast<Eigen::Index>(state.m()) || r.rows() != X.rows())
        throw ShapeError("m_step_networks: responsibilities do not match");
    MixtureState out = state;
    const Vec phi = m_step_phi(r);
    for (std::size_t j = 0; j < state.m(); ++j) {
        const auto jj = static_cast<Eigen::Index>(j);
        out.components[j] = m_step_component(X, r.col(jj), state.components[j], config);
        out.components[j].phi = phi(jj);
    }
    return out;
}

Initialization initialize(const DataMatrix& data, const MnglConfig& config) {
    config.validate();
    const Mat& X = data.values();
    const auto n = X.rows();
    const int m = config.m;
    if (config.k > data.p()) throw ValueError("mngl: k exceeds p");

    Initialization init;
    if (config.init_scheme == InitScheme::UserSupplied) {
        if (config.user_responsibilities.rows() != n || config.user_responsibilities.cols() != m)
            throw ShapeError("mngl: user responsibilities must be n x m");
        check_responsibilities(config.user_responsibilities);
        init.responsibilities = config.user_responsibilities;
    } else if (m == 1) {
        init.responsibilities = Mat::Ones(n, 1);
    } else {
        std::mt19937_64 rng(derive_seed(config.settings.seed, 0x5e5));
        std::uniform_int_distribution<int> pick(0, m - 1);
        init.responsibilities = Mat::Constant(n, m, 0.1 / (m - 1));
        for (Eigen::Index i = 0; i < n; ++i) init.responsibilities(i, pick(rng)) = 0.9;
    }

    const Mat S = weighted_covariance(X, Vec::Ones(n));
    Mat H0 = initial_indicator(S, config.k, config.settings.seed);
    normalize_columns(H0);
    const CglSolution whole = cgl_solve_cov(S, config.k, config.settings, H0, nullptr, cgl_options(config));

    init.state.components.assign(static_cast<std::size_t>(m), Component{1.0 / m, H0, whole.theta});
    init.state.nll = mixture_nll(X, init.state);
    return init;
}

MnglResult mngl_fit(const DataMatrix& data, const MnglConfig& config) {
    config.validate();
    const Mat& X = data.values();
    const auto n = X.rows();
    if (n <= config.k) throw ValueError("mngl: need n > k");
    const int m = config.m;

    Initialization init = initialize(data, config);
    MixtureState state = std::move(init.state);
    Mat r = std::move(init.responsibilities);

    MnglResult res;
    std::mt19937_64 rng(derive_seed(config.settings.seed, 0xc011));
    std::vector<bool> settled(static_cast<std::size_t>(m), false);
    Mat r_prev;
    double nll = 0.0;

    for (int t = 1; t <= config.settings.max_outer_iters; ++t) {
        if (t > 1) r = e_step(X, state, &res.underflow_rows);

        for (int j = 0; j < m; ++j) {
            while (r.col(j).sum() < config.empty_fraction * static_cast<double>(n)) {
                if (res.restarts >= config.max_restarts) {
                    std::ostringstream os;
                    os << "mngl: component " << j << " collapsed after " << res.restarts
                       << " restarts (iteration " << t << ", weights " << r.colwise().sum() << ")";
                    throw FitError(os.str());
                }
                ++res.restarts;
                draw_responsibility_column(r, j, m, rng);
                settled.assign(settled.size(), false);
            }
        }

        MixtureState next = state;
        const Vec phi = m_step_phi(r);
        for (int j = 0; j < m; ++j) next.components[static_cast<std::size_t>(j)].phi = phi(j);
        // The first M-step turns the starting point into the first iterate and
        // is always kept; later updates pass through the guard.
        const bool guard = config.monotone_guard && t > 1;
        double cur = 0.0;
        if (guard) {
            cur = mixture_nll(X, next);
            if (cur > nll) {
                next = state;
                cur = nll;
            }
        }

        for (int j = 0; j < m; ++j) {
            const auto ju = static_cast<std::size_t>(j);
            if (r_prev.size() && settled[ju] && r.col(j) == r_prev.col(j)) continue;
            bool conv = false;
            Component cand = m_step_component(X, r.col(j), next.components[ju], config, &conv);
            if (!guard) {
                next.components[ju] = std::move(cand);
                settled[ju] = conv;
                continue;
            }
            MixtureState trial = next;
            trial.components[ju] = std::move(cand);
            const double v = mixture_nll(X, trial);
            if (v <= cur) {
                next = std::move(trial);
                cur = v;
                settled[ju] = conv;
            } else {
                settled[ju] = true;
            }
        }

        r_prev = r;
        state = std::move(next);
        const double prev = nll;
        nll = mixture_nll(X, state);
        res.nll_trace.push_back(nll);
        state.iterations = t;
        if (t > 1 && std::abs(nll - prev) <= config.settings.tol * std::max(1.0, std::abs(nll))) {
            state.converged = true;
            break;
        }
    }

    std::vector<std::size_t> order(state.m());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        const auto& ca = state.components[a];
        const auto& cb = state.components[b];
        if (ca.phi != cb.phi) return ca.phi > cb.phi;
        return theta_less(ca, cb);
    });
    MixtureState sorted = state;
    for (std::size_t j = 0; j < order.size(); ++j) sorted.components[j] = state.components[order[j]];
    sorted.nll = nll;
    res.state = std::move(sorted);
    res.responsibilities = e_step(X, res.state, &res.underflow_rows);
    return res;
}

}  // namespace mngl

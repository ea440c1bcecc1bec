#include "mngl/cgl.hpp"

#include "mngl/glasso.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace mngl {

namespace {

constexpr double kFloor = 1e-12;
constexpr int kMaxHalvings = 20;

Mat pos(const Mat& a) { return (a.cwiseAbs() + a) / 2.0; }
Mat neg(const Mat& a) { return (a.cwiseAbs() - a) / 2.0; }

double objective_or_inf(const Mat& S, const Mat& H, const Mat& theta, const SolverSettings& st) {
    try {
        return cgl_objective(S, H, theta, st.lambda, st.penalize_diagonal);
    } catch (const DefinitenessError&) {
        return std::numeric_limits<double>::infinity();
    }
}

bool columns_alive(const Mat& H) {
    for (Eigen::Index c = 0; c < H.cols(); ++c)
        if (!(H.col(c).norm() > 0.0)) return false;
    return true;
}

}  // namespace

double cgl_objective(const Mat& S, const Mat& H, const Mat& theta, double lambda, bool penalize_diagonal) {
    const Mat Sstar = H.transpose() * S * H;
    double pen = theta.cwiseAbs().sum();
    if (!penalize_diagonal) pen -= theta.diagonal().cwiseAbs().sum();
    return -logdet_pd(theta) + Sstar.cwiseProduct(theta).sum() + lambda * pen;
}

Mat h_update_ratio(const Mat& H, const Mat& S, const Mat& theta) {
    if (S.rows() != H.rows() || S.cols() != H.rows() || theta.rows() != H.cols() || theta.cols() != H.cols())
        throw ShapeError("h_update: inconsistent shapes");
    const Mat A = S * H;
    const Mat L = -(H.transpose() * A * theta);
    const Mat Ap = pos(A), Am = neg(A), Tp = pos(theta), Tm = neg(theta);
    const Mat num = Ap * Tm + Am * Tp + H * neg(L);
    const Mat den = (Ap * Tp + Am * Tm + H * pos(L)).cwiseMax(kFloor);
    Mat ratio = num.cwiseQuotient(den);
    if (ratio.hasNaN()) {
        std::ostringstream os;
        os << "h_update: NaN in update ratio\nH=\n" << H << "\ntheta=\n" << theta;
        throw NumericalError(os.str());
    }
    return ratio;
}

Mat h_update_cov(const Mat& H, const Mat& S, const Mat& theta) {
    return H.cwiseProduct(h_update_ratio(H, S, theta));
}

Mat h_update(const Mat& H, const Mat& X_tilde, const Mat& theta) {
    return h_update_cov(H, X_tilde.transpose() * X_tilde, theta);
}

CglSolution cgl_solve_cov(const Mat& S, int k, const SolverSettings& settings, const Mat& H_init,
                          const Mat* theta_init, const CglOptions& options) {
    settings.validate();
    if (S.rows() != S.cols()) throw ShapeError("cgl: S must be square");
    if (H_init.rows() != S.rows() || H_init.cols() != k) throw ShapeError("cgl: H_init must be p x k");
    check_finite(S, "cgl input");
    // Warm starts may carry entries that the multiplicative rule drove to 0,
    // so only sign and column mass are checked here.
    check_finite(H_init, "cgl H_init");
    if ((H_init.array() < 0.0).any() || !columns_alive(H_init)) throw ValueError("cgl: invalid H_init");

    CglSolution sol;
    sol.H = H_init;
    Mat prev_theta;
    if (theta_init) {
        if (theta_init->rows() != k || theta_init->cols() != k) throw ShapeError("cgl: theta_init must be k x k");
        check_node_precision(*theta_init);
        prev_theta = *theta_init;
    }

    for (int it = 0; it < settings.max_outer_iters; ++it) {
        Mat Sstar = sol.H.transpose() * S * sol.H;
        Sstar = 0.5 * (Sstar + Sstar.transpose());
        Mat theta = glasso_solve(Sstar, settings).theta;
        double f = cgl_objective(S, sol.H, theta, settings.lambda, settings.penalize_diagonal);
        double dH = 0.0;

        if (options.update_h) {
            const Mat ratio = h_update_ratio(sol.H, S, theta);
            double eta = 1.0;
            const int tries = options.safeguard ? kMaxHalvings : 1;
            for (int h = 0; h < tries; ++h, eta *= 0.5) {
                Mat Hn = eta == 1.0 ? Mat(sol.H.cwiseProduct(ratio))
                                    : Mat(sol.H.cwiseProduct(ratio.array().pow(eta).matrix()));
                if (!Hn.allFinite() || !columns_alive(Hn)) continue;
                Mat Tn = theta;
                normalize_columns(Hn, &Tn);
                const double fn = objective_or_inf(S, Hn, Tn, settings);
                if (!options.safeguard || fn <= f) {
                    dH = (Hn - sol.H).cwiseAbs().maxCoeff();
                    sol.H = std::move(Hn);
                    theta = std::move(Tn);
                    f = fn;
                    break;
                }
            }
        }

        const double dT = prev_theta.size() ? (theta - prev_theta).cwiseAbs().maxCoeff()
                                            : std::numeric_limits<double>::infinity();
        sol.theta = theta;
        prev_theta = std::move(theta);
        sol.objective = f;
        sol.objective_trace.push_back(f);
        sol.iterations = it + 1;
        if (dH < settings.tol && dT < settings.tol) {
            sol.converged = true;
            break;
        }
        // With H frozen the second sweep reproduces the first exactly.
        if (!options.update_h && it == 0 && !theta_init) {
            sol.converged = true;
            break;
        }
    }
    return sol;
}

CglSolution cgl_solve(const Mat& X_tilde, int k, const SolverSettings& settings, const Mat& H_init,
                      const Mat* theta_init, const CglOptions& options) {
    check_finite(X_tilde, "cgl data");
    Mat S = X_tilde.transpose() * X_tilde;
    S = 0.5 * (S + S.transpose());
    return cgl_solve_cov(S, k, settings, H_init, theta_init, options);
}

}  // namespace mngl

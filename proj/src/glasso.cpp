#include "mngl/glasso.hpp"

#include <algorithm>
#include <cmath>

namespace mngl {

namespace {

constexpr int kBoxQpPasses = 1000;
constexpr double kBoxQpTol = 1e-12;
constexpr double kRidge = 1e-8;

bool is_singular(const Mat& S) {
    Eigen::SelfAdjointEigenSolver<Mat> es(S, Eigen::EigenvaluesOnly);
    const double hi = std::max(1.0, es.eigenvalues().cwiseAbs().maxCoeff());
    return es.eigenvalues().minCoeff() <= 1e-12 * hi;
}

// min_a 0.5 (s + a)^T A (s + a) subject to |a_i| <= lam, by cyclic
// coordinate descent. Returns u = s + a.
Vec box_qp(const Mat& A, const Vec& s, double lam) {
    const auto q = s.size();
    Vec a = Vec::Zero(q);
    if (lam == 0.0) return s;
    Vec g = A * s;  // A (s + a)
    for (int pass = 0; pass < kBoxQpPasses; ++pass) {
        double dmax = 0.0;
        for (Eigen::Index i = 0; i < q; ++i) {
            const double na = std::clamp(a(i) - g(i) / A(i, i), -lam, lam);
            const double d = na - a(i);
            if (d != 0.0) {
                g += d * A.col(i);
                a(i) = na;
                dmax = std::max(dmax, std::abs(d));
            }
        }
        if (dmax < kBoxQpTol) break;
    }
    return s + a;
}

}  // namespace

double glasso_objective(const Mat& S, const Mat& theta, double lambda, bool penalize_diagonal) {
    double pen = theta.cwiseAbs().sum();
    if (!penalize_diagonal) pen -= theta.diagonal().cwiseAbs().sum();
    return -logdet_pd(theta) + (S.cwiseProduct(theta)).sum() + lambda * pen;
}

GlassoSolution glasso_solve(const Mat& S_in, const SolverSettings& settings) {
    settings.validate();
    if (S_in.rows() != S_in.cols() || S_in.rows() < 1) throw ShapeError("glasso: S must be square");
    check_finite(S_in, "glasso input");
    if ((S_in - S_in.transpose()).cwiseAbs().maxCoeff() > 1e-10 * (1.0 + S_in.cwiseAbs().maxCoeff()))
        throw ValueError("glasso: S is not symmetric");

    const double lam = settings.lambda;
    const double lam_diag = settings.penalize_diagonal ? lam : 0.0;
    Mat S = 0.5 * (S_in + S_in.transpose());
    if (is_singular(S)) {
        if (lam == 0.0) throw DefinitenessError("glasso: singular S with lambda = 0");
        S.diagonal().array() += kRidge;
    }

    const auto p = S.rows();
    GlassoSolution sol;
    sol.theta = Mat::Zero(p, p);
    for (Eigen::Index i = 0; i < p; ++i) {
        if (!(S(i, i) + lam_diag > 0.0)) throw DefinitenessError("glasso: zero variance with unpenalized diagonal");
        sol.theta(i, i) = 1.0 / (S(i, i) + lam_diag);
    }
    if (p == 1) {
        sol.converged = true;
        sol.objective = glasso_objective(S, sol.theta, lam, settings.penalize_diagonal);
        sol.objective_trace.push_back(sol.objective);
        return sol;
    }

    Mat& T = sol.theta;
    std::vector<Eigen::Index> idx(static_cast<std::size_t>(p - 1));
    Mat A(p - 1, p - 1);
    Vec s12(p - 1);
    for (int it = 0; it < settings.max_inner_iters; ++it) {
        const Mat prev = T;
        for (Eigen::Index j = 0; j < p; ++j) {
            for (Eigen::Index a = 0, c = 0; a < p; ++a)
                if (a != j) idx[static_cast<std::size_t>(c++)] = a;
            for (Eigen::Index r = 0; r < p - 1; ++r) {
                s12(r) = S(idx[r], j);
                for (Eigen::Index c = 0; c < p - 1; ++c) A(r, c) = T(idx[r], idx[c]);
            }
            const double w22 = S(j, j) + lam_diag;
            const Vec u = box_qp(A, s12, lam);
            const Vec Au = A * u;
            const Vec t12 = -Au / w22;
            for (Eigen::Index r = 0; r < p - 1; ++r) {
                T(idx[r], j) = t12(r);
                T(j, idx[r]) = t12(r);
            }
            T(j, j) = (1.0 + u.dot(Au) / w22) / w22;
        }
        sol.iterations = it + 1;
        sol.objective = glasso_objective(S, T, lam, settings.penalize_diagonal);
        sol.objective_trace.push_back(sol.objective);
        if ((T - prev).cwiseAbs().maxCoeff() < settings.tol) {
            sol.converged = true;
            break;
        }
    }
    return sol;
}

EdgeSet edge_set(const Mat& theta, double threshold) {
    EdgeSet out;
    for (Eigen::Index i = 0; i < theta.rows(); ++i)
        for (Eigen::Index j = i + 1; j < theta.cols(); ++j)
            if (std::abs(theta(i, j)) > threshold) out.emplace(static_cast<int>(i), static_cast<int>(j));
    return out;
}

}  // namespace mngl

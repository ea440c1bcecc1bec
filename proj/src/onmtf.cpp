#include "mngl/onmtf.hpp"

#include "mngl/kmeans.hpp"

#include <cmath>

namespace mngl {

namespace {

constexpr double kFloor = 1e-12;
constexpr int kMaxHalvings = 30;

double ortho_defect(const Mat& H) {
    Mat G = H.transpose() * H;
    G.diagonal().setZero();
    return G.norm();
}

}  // namespace

double onmtf_residual(const Mat& A, const Mat& H, const Mat& S_mid) {
    return (A - H * S_mid * H.transpose()).squaredNorm();
}

OnmtfSolution onmtf_solve(const Mat& Sigma, int k, const SolverSettings& settings, const Mat* H_init) {
    settings.validate();
    if (Sigma.rows() != Sigma.cols()) throw ShapeError("onmtf: Sigma must be square");
    if (k < 1 || k > Sigma.rows()) throw ValueError("onmtf: invalid k " + std::to_string(k));
    check_finite(Sigma, "onmtf input");
    const Mat A = Sigma.cwiseAbs();

    OnmtfSolution sol;
    sol.H = H_init ? *H_init : initial_indicator(Sigma, k, settings.seed);
    if (sol.H.rows() != A.rows() || sol.H.cols() != k) throw ShapeError("onmtf: H_init has wrong shape");
    check_cluster_indicator(sol.H);
    normalize_columns(sol.H);
    sol.S_mid = sol.H.transpose() * A * sol.H;
    sol.residual = onmtf_residual(A, sol.H, sol.S_mid);
    sol.residual_trace.push_back(sol.residual);
    sol.orthogonality_defect.push_back(ortho_defect(sol.H));

    for (int it = 0; it < settings.max_outer_iters; ++it) {
        const Mat AHS = A * sol.H * sol.S_mid;
        const Mat den = (sol.H * (sol.H.transpose() * AHS)).cwiseMax(kFloor);
        const Mat ratio = AHS.cwiseQuotient(den);
        bool accepted = false;
        Mat Hn, Sn;
        double rn = 0.0;
        double eta = 0.5;
        for (int h = 0; h < kMaxHalvings; ++h, eta *= 0.5) {
            Hn = sol.H.cwiseProduct(ratio.array().pow(eta).matrix());
            bool dead = false;
            for (Eigen::Index c = 0; c < Hn.cols(); ++c) dead = dead || !(Hn.col(c).norm() > 0.0);
            if (dead || !Hn.allFinite()) continue;
            normalize_columns(Hn);
            Sn = Hn.transpose() * A * Hn;
            rn = onmtf_residual(A, Hn, Sn);
            if (rn <= sol.residual) {
                accepted = true;
                break;
            }
        }
        sol.iterations = it + 1;
        if (!accepted) {
            sol.converged = true;
            break;
        }
        const double dH = (Hn - sol.H).cwiseAbs().maxCoeff();
        sol.H = std::move(Hn);
        sol.S_mid = std::move(Sn);
        sol.residual = rn;
        sol.residual_trace.push_back(rn);
        sol.orthogonality_defect.push_back(ortho_defect(sol.H));
        if (dH < settings.tol) {
            sol.converged = true;
            break;
        }
    }
    return sol;
}

}  // namespace mngl

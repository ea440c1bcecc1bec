#pragma once

#include "mngl/core.hpp"

namespace mngl {

struct CglSolution {
    Mat H;
    Mat theta;
    double objective = 0.0;
    int iterations = 0;
    bool converged = false;
    std::vector<double> objective_trace;  // after each full sweep
};

struct CglOptions {
    bool update_h = true;
    // Halve the update exponent until the objective does not increase.
    bool safeguard = true;
};

// -log det theta + tr(H^T S H theta) + lambda |theta|_1
double cgl_objective(const Mat& S, const Mat& H, const Mat& theta, double lambda, bool penalize_diagonal = true);

// Elementwise multiplicative factor of the H update, given the weighted
// covariance S = X~^T X~. With A = S H and L = -H^T A theta:
//   num = A+ theta- + A- theta+ + H L-
//   den = A+ theta+ + A- theta- + H L+
// where B+ = (|B| + B)/2 and B- = (|B| - B)/2. For A >= 0 this is the plain
// (A theta- + H L-) / (A theta+ + H L+). Denominators floored at 1e-12.
Mat h_update_ratio(const Mat& H, const Mat& S, const Mat& theta);

// H .* h_update_ratio(H, S, theta)
Mat h_update_cov(const Mat& H, const Mat& S, const Mat& theta);
Mat h_update(const Mat& H, const Mat& X_tilde, const Mat& theta);

// Alternates glasso on H^T S H (theta first) with the H update, renormalizing
// H columns to unit norm and compensating theta. Stops when both H and theta
// move less than settings.tol in max-norm. theta_init only seeds the first
// change test and the starting objective.
CglSolution cgl_solve_cov(const Mat& S, int k, const SolverSettings& settings, const Mat& H_init,
                          const Mat* theta_init = nullptr, const CglOptions& options = {});

CglSolution cgl_solve(const Mat& X_tilde, int k, const SolverSettings& settings, const Mat& H_init,
                      const Mat* theta_init = nullptr, const CglOptions& options = {});

}  // namespace mngl

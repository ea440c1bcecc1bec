#pragma once

#include "mngl/core.hpp"

#include <set>
#include <utility>

namespace mngl {

struct GlassoSolution {
    Mat theta;
    double objective = 0.0;
    int iterations = 0;
    bool converged = false;
    std::vector<double> objective_trace;  // after each sweep
};

// Penalized Gaussian likelihood minimized by glasso_solve:
// -log det theta + tr(S theta) + lambda * |theta|_1 (diagonal optional).
double glasso_objective(const Mat& S, const Mat& theta, double lambda, bool penalize_diagonal = true);

// Primal block-coordinate descent over columns. Each column update is the
// exact minimizer over (theta_12, theta_22) with the rest fixed, obtained from
// a box-constrained QP solved by coordinate descent; iterates stay PD.
// Uses settings.lambda, max_inner_iters, tol and penalize_diagonal.
GlassoSolution glasso_solve(const Mat& S, const SolverSettings& settings);

using EdgeSet = std::set<std::pair<int, int>>;

// {(i,j) : i < j, |theta_ij| > threshold}
EdgeSet edge_set(const Mat& theta, double threshold = 1e-4);

}  // namespace mngl

#pragma once

#include "mngl/cgl.hpp"
#include "mngl/core.hpp"

namespace mngl {

enum class InitScheme { RandomResponsibility, UserSupplied };

struct MnglConfig {
    int m = 2;
    int k = 5;
    SolverSettings settings;
    InitScheme init_scheme = InitScheme::RandomResponsibility;
    Mat user_responsibilities;  // n x m, used with InitScheme::UserSupplied

    // false: every H_j stays at the initial indicator and only phi and the
    // precisions are estimated (frozen-H variant).
    bool update_h = true;
    // M-step budget: one CGL sweep per component per EM iteration unless set.
    // Always on for m = 1, where the E-step is trivial.
    bool solve_to_convergence = false;
    // Keep an M-step update only if the mixture NLL does not increase.
    bool monotone_guard = true;
    int max_restarts = 3;
    double empty_fraction = 1e-3;  // collapse if sum_i r_ij < empty_fraction * n

    void validate() const;
};

struct MnglResult {
    MixtureState state;
    Mat responsibilities;
    std::vector<double> nll_trace;
    int restarts = 0;
    int underflow_rows = 0;  // E-step rows reset to uniform
};

// Posterior r_ij in log-domain. Rows whose total density underflows get 1/m;
// their count is added to *underflow_rows when given.
Mat e_step(const Mat& X, const MixtureState& state, int* underflow_rows = nullptr);

// Column means of r.
Vec m_step_phi(const Mat& r);

// One M-step component update on the r-weighted covariance, warm-started
// from `comp`. Sets *converged when the update moved less than tol (or the
// subproblem was solved to convergence).
Component m_step_component(const Mat& X, const Vec& r_col, const Component& comp, const MnglConfig& config,
                           bool* converged = nullptr);

// phi from m_step_phi and every component from m_step_component.
MixtureState m_step_networks(const Mat& X, const Mat& r, const MixtureState& state, const MnglConfig& config);

struct Initialization {
    MixtureState state;
    Mat responsibilities;
};

// r rows are 0.9 on a random component and 0.1/(m-1) elsewhere (all ones for
// m = 1); phi = 1/m; H_j = normalized initial_indicator of the full-sample
// covariance; theta_j from CGL on the full sample.
Initialization initialize(const DataMatrix& X, const MnglConfig& config);

MnglResult mngl_fit(const DataMatrix& X, const MnglConfig& config);

}  // namespace mngl

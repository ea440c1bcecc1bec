#pragma once

#include "mngl/cgl.hpp"
#include "mngl/core.hpp"
#include "mngl/onmtf.hpp"

namespace mngl {

// Standalone single-state solvers started from initial_indicator(S, k, seed).
CglSolution standalone_cgl(const Mat& S, int k, const SolverSettings& settings);
OnmtfSolution standalone_onmtf(const Mat& S, int k, const SolverSettings& settings);

struct PipelineResult {
    std::vector<int> assignment;  // k-means state label per observation
    std::vector<CglSolution> cgl;      // filled by pipeline_cgl
    std::vector<OnmtfSolution> onmtf;  // filled by pipeline_onmtf
};

// k-means (seed = settings.seed) on observation rows, then one solver per
// state on the empirical covariance of that state's rows.
PipelineResult pipeline_cgl(const DataMatrix& X, int m, int k, const SolverSettings& settings);
PipelineResult pipeline_onmtf(const DataMatrix& X, int m, int k, const SolverSettings& settings);

// Rows of X whose label equals `state`.
Mat subset_rows(const Mat& X, const std::vector<int>& labels, int state);

}  // namespace mngl

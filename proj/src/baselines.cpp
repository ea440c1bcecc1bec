#include "mngl/baselines.hpp"

#include "mngl/kmeans.hpp"

namespace mngl {

namespace {

template <class Solve>
PipelineResult run_pipeline(const DataMatrix& data, int m, int k, const SolverSettings& settings, Solve solve) {
    settings.validate();
    if (m < 1 || data.n() < m) throw PipelineError("pipeline: need n >= m >= 1");
    PipelineResult res;
    res.assignment = kmeans(data.values(), m, settings.seed);
    for (int s = 0; s < m; ++s) {
        const Mat Xs = subset_rows(data.values(), res.assignment, s);
        if (Xs.rows() < k)
            throw PipelineError("pipeline: state " + std::to_string(s) + " has " + std::to_string(Xs.rows()) +
                                " observations, fewer than k = " + std::to_string(k));
        solve(res, empirical_covariance(Xs));
    }
    return res;
}

}  // namespace

CglSolution standalone_cgl(const Mat& S, int k, const SolverSettings& settings) {
    Mat H0 = initial_indicator(S, k, settings.seed);
    normalize_columns(H0);
    return cgl_solve_cov(S, k, settings, H0);
}

OnmtfSolution standalone_onmtf(const Mat& S, int k, const SolverSettings& settings) {
    return onmtf_solve(S, k, settings);
}

Mat subset_rows(const Mat& X, const std::vector<int>& labels, int state) {
    Eigen::Index count = 0;
    for (int l : labels) count += l == state;
    Mat out(count, X.cols());
    Eigen::Index r = 0;
    for (std::size_t i = 0; i < labels.size(); ++i)
        if (labels[i] == state) out.row(r++) = X.row(static_cast<Eigen::Index>(i));
    return out;
}

PipelineResult pipeline_cgl(const DataMatrix& X, int m, int k, const SolverSettings& settings) {
    return run_pipeline(X, m, k, settings,
                        [&](PipelineResult& r, const Mat& S) { r.cgl.push_back(standalone_cgl(S, k, settings)); });
}

PipelineResult pipeline_onmtf(const DataMatrix& X, int m, int k, const SolverSettings& settings) {
    return run_pipeline(X, m, k, settings,
                        [&](PipelineResult& r, const Mat& S) { r.onmtf.push_back(standalone_onmtf(S, k, settings)); });
}

}  // namespace mngl

#pragma once

#include "mngl/core.hpp"

namespace mngl {

struct OnmtfSolution {
    Mat H;      // p x k, unit-norm columns
    Mat S_mid;  // k x k, H^T |Sigma| H
    double residual = 0.0;
    int iterations = 0;
    bool converged = false;
    std::vector<double> residual_trace;
    std::vector<double> orthogonality_defect;  // |H^T H - diag(H^T H)|_F per sweep
};

double onmtf_residual(const Mat& A, const Mat& H, const Mat& S_mid);

// Factorizes |Sigma| ~ H S_mid H^T with H >= 0. Multiplicative update
// H <- H .* (A H S / (H H^T A H S))^eta followed by column normalization; eta
// starts at 1/2 and is halved until the residual does not increase.
// H_init defaults to initial_indicator(Sigma, k, settings.seed).
OnmtfSolution onmtf_solve(const Mat& Sigma, int k, const SolverSettings& settings, const Mat* H_init = nullptr);

}  // namespace mngl

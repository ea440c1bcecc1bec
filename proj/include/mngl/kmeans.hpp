#pragma once

#include "mngl/core.hpp"

namespace mngl {

struct KmeansResult {
    std::vector<int> labels;
    Mat centers;
    double inertia = 0.0;
};

// Lloyd iterations from k-means++ seeding, best inertia over `restarts`.
// Empty clusters are re-seeded with the point farthest from its center.
KmeansResult kmeans_fit(const Mat& points, int m, std::uint64_t seed, int restarts = 10, int max_iter = 300);

std::vector<int> kmeans(const Mat& points, int m, std::uint64_t seed);

// |correlation| rows derived from a covariance; zero-variance variables get a
// unit self-correlation and zeros elsewhere.
Mat abs_correlation(const Mat& S);

// |partial correlation| rows from (S + ridge * mean(diag S) * I)^-1. The ridge
// keeps rank-deficient covariances (n < p) usable.
Mat abs_partial_correlation(const Mat& S, double ridge = 1e-3);

// k-means on the rows of |partial correlation(S)|, as a 0/1 indicator plus 0.2 (p x k, not
// normalized). Shared starting point for ONMtF, CGL and MNGL.
Mat initial_indicator(const Mat& S, int k, std::uint64_t seed);

// Row-wise argmax of H, ties to the lowest column. Throws AssignmentError on
// an all-zero row.
std::vector<int> cluster_assign(const Mat& H);

}  // namespace mngl

#pragma once

#include "mngl/core.hpp"

#include <cmath>
#include <numeric>
#include <random>
#include <vector>

namespace testutil {

using mngl::Mat;
using mngl::Vec;

inline Mat gaussian(int rows, int cols, std::mt19937_64& rng, double sd = 1.0) {
    std::normal_distribution<double> nd(0.0, sd);
    Mat a(rows, cols);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) a(i, j) = nd(rng);
    return a;
}

inline Mat uniform(int rows, int cols, std::mt19937_64& rng, double lo = 0.0, double hi = 1.0) {
    std::uniform_real_distribution<double> ud(lo, hi);
    Mat a(rows, cols);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) a(i, j) = ud(rng);
    return a;
}

// A A^T / d + shift I
inline Mat random_pd(int d, std::mt19937_64& rng, double shift = 0.5) {
    const Mat a = gaussian(d, d, rng);
    Mat s = a * a.transpose() / d;
    s.diagonal().array() += shift;
    return s;
}

// Random row-stochastic matrix.
inline Mat random_stochastic(int n, int m, std::mt19937_64& rng) {
    Mat r = uniform(n, m, rng, 0.05, 1.0);
    for (int i = 0; i < n; ++i) r.row(i) /= r.row(i).sum();
    return r;
}

inline double max_abs_diff(const Mat& a, const Mat& b) { return (a - b).cwiseAbs().maxCoeff(); }

// Determinant by cofactor expansion, independent of any factorization.
inline double det_cofactor(const Mat& a) {
    const int d = static_cast<int>(a.rows());
    if (d == 1) return a(0, 0);
    if (d == 2) return a(0, 0) * a(1, 1) - a(0, 1) * a(1, 0);
    double total = 0.0;
    for (int c = 0; c < d; ++c) {
        Mat minor(d - 1, d - 1);
        for (int r = 1; r < d; ++r)
            for (int cc = 0, k = 0; cc < d; ++cc)
                if (cc != c) minor(r - 1, k++) = a(r, cc);
        total += ((c % 2) ? -1.0 : 1.0) * a(0, c) * det_cofactor(minor);
    }
    return total;
}

// log N(y | 0, theta^{-1}) written out term by term.
inline double naive_log_density(const Vec& y, const Mat& theta) {
    const double k = static_cast<double>(y.size());
    double quad = 0.0;
    for (int a = 0; a < y.size(); ++a)
        for (int b = 0; b < y.size(); ++b) quad += y(a) * theta(a, b) * y(b);
    return -0.5 * k * std::log(2.0 * M_PI) + 0.5 * std::log(det_cofactor(theta)) - 0.5 * quad;
}

inline double naive_mixture_nll(const Mat& X, const mngl::MixtureState& st) {
    double total = 0.0;
    for (int i = 0; i < X.rows(); ++i) {
        double lik = 0.0;
        for (const auto& c : st.components) {
            const Vec y = c.H.transpose() * X.row(i).transpose();
            lik += c.phi * std::exp(naive_log_density(y, c.theta));
        }
        total -= std::log(lik);
    }
    return total;
}

inline std::vector<int> random_labels(int n, int m, std::mt19937_64& rng) {
    std::uniform_int_distribution<int> ud(0, m - 1);
    std::vector<int> out(static_cast<std::size_t>(n));
    for (auto& v : out) v = ud(rng);
    return out;
}

// Unit-norm columns of a 0/1 block indicator with the given block sizes.
inline Mat block_indicator(const std::vector<int>& sizes) {
    const int p = std::accumulate(sizes.begin(), sizes.end(), 0);
    Mat H = Mat::Zero(p, static_cast<int>(sizes.size()));
    int v = 0;
    for (std::size_t b = 0; b < sizes.size(); ++b)
        for (int s = 0; s < sizes[b]; ++s) H(v++, static_cast<int>(b)) = 1.0;
    return H;
}

}  // namespace testutil

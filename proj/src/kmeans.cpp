#include "mngl/kmeans.hpp"

#include <cmath>
#include <limits>
#include <random>

namespace mngl {

namespace {

Mat seed_centers(const Mat& X, int m, std::mt19937_64& rng) {
    const auto n = X.rows();
    Mat C(m, X.cols());
    std::uniform_int_distribution<Eigen::Index> pick(0, n - 1);
    C.row(0) = X.row(pick(rng));
    Vec d2 = (X.rowwise() - C.row(0)).rowwise().squaredNorm();
    for (int c = 1; c < m; ++c) {
        Eigen::Index next;
        const double total = d2.sum();
        if (total > 0.0) {
            std::uniform_real_distribution<double> u(0.0, total);
            double t = u(rng), acc = 0.0;
            next = n - 1;
            for (Eigen::Index i = 0; i < n; ++i) {
                acc += d2(i);
                if (acc >= t && d2(i) > 0.0) {
                    next = i;
                    break;
                }
            }
        } else {
            next = pick(rng);
        }
        C.row(c) = X.row(next);
        d2 = d2.cwiseMin((X.rowwise() - C.row(c)).rowwise().squaredNorm());
    }
    return C;
}

KmeansResult lloyd(const Mat& X, Mat C, int max_iter) {
    const auto n = X.rows();
    const int m = static_cast<int>(C.rows());
    KmeansResult res;
    res.labels.assign(static_cast<std::size_t>(n), -1);
    Vec dist(n);
    for (int it = 0; it < max_iter; ++it) {
        bool changed = false;
        for (Eigen::Index i = 0; i < n; ++i) {
            Eigen::Index best;
            dist(i) = (C.rowwise() - X.row(i)).rowwise().squaredNorm().minCoeff(&best);
            if (res.labels[i] != best) {
                res.labels[i] = static_cast<int>(best);
                changed = true;
            }
        }
        std::vector<int> count(static_cast<std::size_t>(m), 0);
        Mat sum = Mat::Zero(m, X.cols());
        for (Eigen::Index i = 0; i < n; ++i) {
            ++count[res.labels[i]];
            sum.row(res.labels[i]) += X.row(i);
        }
        bool repaired = false;
        for (int c = 0; c < m; ++c) {
            if (count[c] > 0) {
                C.row(c) = sum.row(c) / count[c];
                continue;
            }
            Eigen::Index far;
            dist.maxCoeff(&far);
            C.row(c) = X.row(far);
            dist(far) = 0.0;
            repaired = true;
        }
        if (!changed && !repaired) break;
    }
    for (Eigen::Index i = 0; i < n; ++i) {
        Eigen::Index best;
        dist(i) = (C.rowwise() - X.row(i)).rowwise().squaredNorm().minCoeff(&best);
        res.labels[i] = static_cast<int>(best);
    }
    res.inertia = dist.sum();
    res.centers = std::move(C);
    return res;
}

}  // namespace

KmeansResult kmeans_fit(const Mat& points, int m, std::uint64_t seed, int restarts, int max_iter) {
    if (m < 1 || points.rows() < m) throw ValueError("kmeans: need n >= m >= 1");
    check_finite(points, "kmeans input");
    std::mt19937_64 rng(seed);
    KmeansResult best;
    best.inertia = std::numeric_limits<double>::infinity();
    for (int r = 0; r < restarts; ++r) {
        KmeansResult res = lloyd(points, seed_centers(points, m, rng), max_iter);
        if (res.inertia < best.inertia) best = std::move(res);
    }
    return best;
}

std::vector<int> kmeans(const Mat& points, int m, std::uint64_t seed) {
    return kmeans_fit(points, m, seed).labels;
}

Mat abs_correlation(const Mat& S) {
    const auto p = S.rows();
    Vec sd = S.diagonal().cwiseMax(0.0).cwiseSqrt();
    Mat R(p, p);
    for (Eigen::Index i = 0; i < p; ++i)
        for (Eigen::Index j = 0; j < p; ++j) {
            if (i == j) R(i, j) = 1.0;
            else if (sd(i) > 0.0 && sd(j) > 0.0) R(i, j) = std::abs(S(i, j)) / (sd(i) * sd(j));
            else R(i, j) = 0.0;
        }
    return R;
}

Mat abs_partial_correlation(const Mat& S, double ridge) {
    const auto p = S.rows();
    const double scale = std::max(S.trace() / static_cast<double>(p), 1e-12);
    Mat reg = S;
    reg.diagonal().array() += ridge * scale;
    Eigen::LLT<Mat> llt(reg);
    if (llt.info() != Eigen::Success) throw DefinitenessError("abs_partial_correlation: covariance not PSD");
    const Mat T = llt.solve(Mat::Identity(p, p));
    Mat P(p, p);
    for (Eigen::Index i = 0; i < p; ++i)
        for (Eigen::Index j = 0; j < p; ++j) P(i, j) = std::abs(T(i, j)) / std::sqrt(T(i, i) * T(j, j));
    return P;
}

Mat initial_indicator(const Mat& S, int k, std::uint64_t seed) {
    if (k < 1 || k > S.rows()) throw ValueError("initial_indicator: need 1 <= k <= p");
    const auto labels = kmeans(abs_partial_correlation(S), k, seed);
    Mat H = Mat::Constant(S.rows(), k, 0.2);
    for (std::size_t v = 0; v < labels.size(); ++v) H(static_cast<Eigen::Index>(v), labels[v]) += 1.0;
    return H;
}

std::vector<int> cluster_assign(const Mat& H) {
    std::vector<int> out(static_cast<std::size_t>(H.rows()));
    for (Eigen::Index v = 0; v < H.rows(); ++v) {
        int best = 0;
        for (Eigen::Index c = 1; c < H.cols(); ++c)
            if (H(v, c) > H(v, best)) best = static_cast<int>(c);
        if (!(H(v, best) > 0.0)) throw AssignmentError("cluster_assign: row " + std::to_string(v) + " has no positive entry");
        out[static_cast<std::size_t>(v)] = best;
    }
    return out;
}

}  // namespace mngl

#include "mngl/core.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace mngl {

namespace {

std::string dims(const Mat& a) {
    std::ostringstream os;
    os << a.rows() << "x" << a.cols();
    return os.str();
}

}  // namespace

DataMatrix::DataMatrix(Mat values) : values_(std::move(values)) {
    if (values_.rows() < 1 || values_.cols() < 2)
        throw ShapeError("data matrix needs n >= 1 and p >= 2, got " + dims(values_));
    check_finite(values_, "data matrix");
}

void SolverSettings::validate() const {
    if (!(lambda >= 0.0) || !std::isfinite(lambda)) throw ValueError("lambda must be >= 0");
    if (!(tol > 0.0)) throw ValueError("tol must be > 0");
    if (max_outer_iters < 1 || max_inner_iters < 1) throw ValueError("iteration caps must be >= 1");
    if (!(edge_threshold > 0.0)) throw ValueError("edge_threshold must be > 0");
}

void MixtureState::validate() const {
    if (components.empty()) throw ValueError("mixture state has no components");
    double total = 0.0;
    const auto k = components.front().theta.rows();
    for (const auto& c : components) {
        if (!(c.phi > 0.0 && c.phi <= 1.0)) throw ValueError("phi outside (0,1]");
        if (c.theta.rows() != k || c.H.cols() != k) throw ShapeError("components disagree on k");
        total += c.phi;
    }
    if (std::abs(total - 1.0) > 1e-9) throw ValueError("phi does not sum to 1");
}

void check_finite(const Mat& a, const char* what) {
    if (!a.allFinite()) throw ValueError(std::string(what) + " has non-finite entries");
}

void check_cluster_indicator(const Mat& H) {
    if (H.rows() < 1 || H.cols() < 1) throw ShapeError("empty cluster indicator");
    check_finite(H, "cluster indicator");
    if ((H.array() < 0.0).any()) throw ValueError("cluster indicator has negative entries");
    for (Eigen::Index i = 0; i < H.rows(); ++i)
        if (H.row(i).maxCoeff() <= 0.0) throw ValueError("cluster indicator row " + std::to_string(i) + " is zero");
    for (Eigen::Index j = 0; j < H.cols(); ++j)
        if (!(H.col(j).norm() > 0.0)) throw ValueError("cluster indicator column " + std::to_string(j) + " is zero");
}

void check_node_precision(const Mat& theta) {
    if (theta.rows() != theta.cols()) throw ShapeError("precision must be square, got " + dims(theta));
    check_finite(theta, "precision");
    if ((theta - theta.transpose()).cwiseAbs().maxCoeff() > 1e-10 * (1.0 + theta.cwiseAbs().maxCoeff()))
        throw ValueError("precision is not symmetric");
    Eigen::LLT<Mat> llt(theta);
    if (llt.info() != Eigen::Success) throw DefinitenessError("precision is not positive definite");
}

void check_responsibilities(const Mat& r, double tol) {
    check_finite(r, "responsibilities");
    if ((r.array() < 0.0).any() || (r.array() > 1.0 + tol).any())
        throw ValueError("responsibility outside [0,1]");
    for (Eigen::Index i = 0; i < r.rows(); ++i)
        if (std::abs(r.row(i).sum() - 1.0) > tol)
            throw ValueError("responsibility row " + std::to_string(i) + " does not sum to 1");
}

Mat project(const Mat& X, const Mat& H) {
    if (X.cols() != H.rows())
        throw ShapeError("project: X is " + dims(X) + " but H is " + dims(H));
    return X * H;
}

Mat empirical_covariance(const Mat& X) {
    if (X.rows() < 1) throw ShapeError("empirical_covariance: no observations");
    check_finite(X, "data");
    Mat S = X.transpose() * X / static_cast<double>(X.rows());
    return 0.5 * (S + S.transpose());
}

Mat weighted_data(const Mat& X, const Vec& r) {
    if (r.size() != X.rows()) throw ShapeError("weighted_data: weight length mismatch");
    if ((r.array() < 0.0).any()) throw ValueError("weighted_data: negative weight");
    const double s = r.sum();
    if (!(s > 0.0)) throw EmptyComponentError("weighted_data: component has zero total weight");
    Mat out(X.rows(), X.cols());
    for (Eigen::Index i = 0; i < X.rows(); ++i) out.row(i) = std::sqrt(r(i) / s) * X.row(i);
    return out;
}

Mat weighted_covariance(const Mat& X, const Vec& r) {
    Mat Xt = weighted_data(X, r);
    Mat S = Xt.transpose() * Xt;
    return 0.5 * (S + S.transpose());
}

double logdet_pd(const Mat& a) {
    Eigen::LLT<Mat> llt(a);
    if (llt.info() != Eigen::Success) throw DefinitenessError("matrix is not positive definite");
    const Mat& L = llt.matrixLLT();
    double ld = 0.0;
    for (Eigen::Index i = 0; i < a.rows(); ++i) ld += std::log(L(i, i));
    return 2.0 * ld;
}

Mat component_log_densities(const Mat& X, const MixtureState& state) {
    const auto n = X.rows();
    Mat out(n, static_cast<Eigen::Index>(state.m()));
    for (std::size_t j = 0; j < state.m(); ++j) {
        const auto& c = state.components[j];
        if (c.H.rows() != X.cols() || c.H.cols() != c.theta.rows())
            throw ShapeError("component " + std::to_string(j) + " does not match data");
        Eigen::LLT<Mat> llt(c.theta);
        if (llt.info() != Eigen::Success)
            throw DefinitenessError("component " + std::to_string(j) + " precision is not positive definite");
        const Mat L = llt.matrixL();
        double ld = 0.0;
        for (Eigen::Index a = 0; a < L.rows(); ++a) ld += 2.0 * std::log(L(a, a));
        const double k = static_cast<double>(c.theta.rows());
        const double base = std::log(std::max(c.phi, 1e-300)) + 0.5 * ld -
                            0.5 * k * std::log(2.0 * std::numbers::pi);
        // y^T theta y = |L^T y|^2, row-wise as |Y L|^2
        const Mat YL = (X * c.H) * L;
        out.col(static_cast<Eigen::Index>(j)) = (base - 0.5 * YL.rowwise().squaredNorm().array()).matrix();
    }
    return out;
}

double mixture_nll(const Mat& X, const MixtureState& state) {
    const Mat lp = component_log_densities(X, state);
    double total = 0.0;
    for (Eigen::Index i = 0; i < lp.rows(); ++i) {
        const double mx = lp.row(i).maxCoeff();
        total += mx + std::log((lp.row(i).array() - mx).exp().sum());
    }
    return -total;
}

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a, std::uint64_t b) {
    auto mix = [](std::uint64_t z) {
        z += 0x9e3779b97f4a7c15ULL;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    };
    return mix(mix(mix(base) ^ a) ^ (b * 0x632be59bd9b4e019ULL));
}

void normalize_columns(Mat& H, Mat* theta) {
    for (Eigen::Index j = 0; j < H.cols(); ++j) {
        const double d = H.col(j).norm();
        if (!(d > 0.0)) throw NumericalError("normalize_columns: column " + std::to_string(j) + " vanished");
        H.col(j) /= d;
        if (theta) {
            theta->row(j) *= d;
            theta->col(j) *= d;
        }
    }
}

}  // namespace mngl

#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace mngl {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;

// Error kinds surfaced by the library. The CLI maps them to exit codes.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct ShapeError : Error { using Error::Error; };
struct ValueError : Error { using Error::Error; };
struct DefinitenessError : Error { using Error::Error; };
struct NumericalError : Error { using Error::Error; };
struct EmptyComponentError : Error { using Error::Error; };
struct AssignmentError : Error { using Error::Error; };
struct FitError : Error { using Error::Error; };
struct GenerationError : Error { using Error::Error; };
struct PipelineError : Error { using Error::Error; };
struct ParseError : Error { using Error::Error; };
struct ConfigError : Error { using Error::Error; };

// n observations (rows) of p variables (columns). Validated on construction.
class DataMatrix {
public:
    explicit DataMatrix(Mat values);
    const Mat& values() const { return values_; }
    Eigen::Index n() const { return values_.rows(); }
    Eigen::Index p() const { return values_.cols(); }

private:
    Mat values_;
};

struct SolverSettings {
    double lambda = 0.1;
    int max_outer_iters = 100;
    int max_inner_iters = 200;
    double tol = 1e-6;
    std::uint64_t seed = 0;
    double edge_threshold = 1e-4;
    bool penalize_diagonal = true;

    void validate() const;
};

struct Component {
    double phi = 1.0;
    Mat H;      // p x k cluster indicator
    Mat theta;  // k x k node precision
};

struct MixtureState {
    std::vector<Component> components;
    double nll = 0.0;
    int iterations = 0;
    bool converged = false;

    std::size_t m() const { return components.size(); }
    void validate() const;
};

// Shape and value checks for the matrix-valued domain types.
void check_finite(const Mat& a, const char* what);
void check_cluster_indicator(const Mat& H);
void check_node_precision(const Mat& theta);
void check_responsibilities(const Mat& r, double tol = 1e-9);

// Y = X H, row i is H^T x_i.
Mat project(const Mat& X, const Mat& H);

// (1/n) X^T X, no centering, symmetrized.
Mat empirical_covariance(const Mat& X);

// Row i scaled by sqrt(r_i / sum(r)).
Mat weighted_data(const Mat& X, const Vec& r);

// Responsibility-weighted covariance with unit total weight, equal to
// weighted_data(X, r)^T weighted_data(X, r).
Mat weighted_covariance(const Mat& X, const Vec& r);

// log det of a symmetric PD matrix; throws DefinitenessError otherwise.
double logdet_pd(const Mat& a);

// n x m matrix of log(phi_j) + log N(H_j^T x_i | 0, theta_j^{-1}).
Mat component_log_densities(const Mat& X, const MixtureState& state);

// -sum_i log sum_j phi_j N(H_j^T x_i | 0, theta_j^{-1}).
double mixture_nll(const Mat& X, const MixtureState& state);

// Independent stream seed from a base seed and stream ids (splitmix64 mix).
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a, std::uint64_t b = 0);

// Scale columns of H to unit norm; theta (if given) becomes D theta D so that
// tr(H^T S H theta) is unchanged.
void normalize_columns(Mat& H, Mat* theta = nullptr);

}  // namespace mngl

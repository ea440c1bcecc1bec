#include "helpers.hpp"

#include "mngl/glasso.hpp"

#include <Eigen/Eigenvalues>
#include <doctest.h>

using namespace mngl;
using namespace testutil;

namespace {

SolverSettings with_lambda(double lambda) {
    SolverSettings s;
    s.lambda = lambda;
    s.tol = 1e-10;
    s.max_inner_iters = 2000;
    return s;
}

// Profile of the 2x2 objective over the off-diagonal b. For fixed b the
// stationarity conditions in (a, c) give a = w2 D, c = w1 D with
// D = ac - b^2 = (1 + sqrt(1 + 4 w1 w2 b^2)) / (2 w1 w2).
struct TwoByTwo {
    double s11, s12, s22, lambda;
    Mat at(double b) const {
        const double w1 = s11 + lambda, w2 = s22 + lambda;
        const double D = (1.0 + std::sqrt(1.0 + 4.0 * w1 * w2 * b * b)) / (2.0 * w1 * w2);
        Mat t(2, 2);
        t << w2 * D, b, b, w1 * D;
        return t;
    }
    double f(double b) const {
        const Mat t = at(b);
        return -std::log(t(0, 0) * t(1, 1) - b * b) + s11 * t(0, 0) + 2.0 * s12 * b + s22 * t(1, 1) +
               lambda * (t(0, 0) + t(1, 1) + 2.0 * std::abs(b));
    }
    Mat minimize() const {
        double best = 0.0, fb = f(0.0);
        for (int i = -20000; i <= 20000; ++i) {
            const double b = i * 1e-4;
            if (f(b) < fb) fb = f(b), best = b;
        }
        double lo = best - 1e-4, hi = best + 1e-4;
        const double g = (std::sqrt(5.0) - 1.0) / 2.0;
        for (int it = 0; it < 200; ++it) {
            const double x1 = hi - g * (hi - lo), x2 = lo + g * (hi - lo);
            if (f(x1) < f(x2)) hi = x2;
            else lo = x1;
        }
        return at(0.5 * (lo + hi));
    }
};

}  // namespace

TEST_SUITE("glasso") {

TEST_CASE("diagonal covariance has the analytic solution") {
    Vec d(4);
    d << 0.5, 1.0, 2.0, 3.5;
    const Mat S = d.asDiagonal();
    for (double lambda : {0.0, 0.3, 1.0}) {
        const auto sol = glasso_solve(S, with_lambda(lambda));
        for (int i = 0; i < 4; ++i) CHECK(sol.theta(i, i) == doctest::Approx(1.0 / (d(i) + lambda)).epsilon(1e-12));
        Mat off = sol.theta;
        off.diagonal().setZero();
        CHECK(off.isZero(0.0));
    }
}

TEST_CASE("diagonal covariance with an unpenalized diagonal") {
    Vec d(3);
    d << 0.5, 2.0, 4.0;
    auto s = with_lambda(0.7);
    s.penalize_diagonal = false;
    const auto sol = glasso_solve(d.asDiagonal(), s);
    for (int i = 0; i < 3; ++i) CHECK(sol.theta(i, i) == doctest::Approx(1.0 / d(i)).epsilon(1e-12));
}

TEST_CASE("zero penalty gives the inverse") {
    std::mt19937_64 rng(21);
    for (int t = 0; t < 5; ++t) {
        const Mat S = random_pd(6, rng);
        const auto sol = glasso_solve(S, with_lambda(0.0));
        CHECK(max_abs_diff(sol.theta, S.inverse()) <= 1e-6);
        CHECK(sol.converged);
    }
}

TEST_CASE("2x2 solution matches the brute-force profile oracle") {
    Mat S(2, 2);
    S << 1, 0.5, 0.5, 1;
    const Mat oracle = TwoByTwo{1.0, 0.5, 1.0, 0.1}.minimize();
    const auto sol = glasso_solve(S, with_lambda(0.1));
    CHECK(max_abs_diff(sol.theta, oracle) <= 1e-4);
    // frozen from the oracle
    Mat frozen(2, 2);
    frozen << 1.04761905, -0.38095238, -0.38095238, 1.04761905;
    CHECK(max_abs_diff(sol.theta, frozen) <= 1e-6);
    CHECK(sol.objective == doctest::Approx(2.048790164169432).epsilon(1e-9));
}

TEST_CASE("2x2 solutions match the oracle on random problems") {
    std::mt19937_64 rng(22);
    for (int t = 0; t < 10; ++t) {
        const Mat S = random_pd(2, rng, 0.2);
        const double lambda = uniform(1, 1, rng, 0.01, 0.5)(0, 0);
        const Mat oracle = TwoByTwo{S(0, 0), S(0, 1), S(1, 1), lambda}.minimize();
        CHECK(max_abs_diff(glasso_solve(S, with_lambda(lambda)).theta, oracle) <= 1e-4);
    }
}

TEST_CASE("objective is non-increasing across sweeps") {
    std::mt19937_64 rng(23);
    for (int t = 0; t < 10; ++t) {
        const Mat S = empirical_covariance(gaussian(30, 12, rng));
        const auto sol = glasso_solve(S, with_lambda(0.05 + 0.05 * t));
        for (std::size_t i = 1; i < sol.objective_trace.size(); ++i)
            CHECK(sol.objective_trace[i] <= sol.objective_trace[i - 1] + 1e-9);
        CHECK(sol.objective == doctest::Approx(glasso_objective(S, sol.theta, 0.05 + 0.05 * t)).epsilon(1e-12));
    }
}

TEST_CASE("l1 norm shrinks as the penalty grows") {
    std::mt19937_64 rng(24);
    for (int t = 0; t < 5; ++t) {
        const Mat S = empirical_covariance(gaussian(40, 8, rng));
        double prev = std::numeric_limits<double>::infinity();
        for (double lambda : {0.01, 0.05, 0.1, 0.2, 0.4}) {
            const double norm = glasso_solve(S, with_lambda(lambda)).theta.cwiseAbs().sum();
            CHECK(norm <= prev + 1e-6);
            prev = norm;
        }
    }
}

TEST_CASE("solution is permutation equivariant") {
    std::mt19937_64 rng(25);
    const Mat S = empirical_covariance(gaussian(50, 7, rng));
    std::vector<int> perm{3, 0, 6, 1, 5, 2, 4};
    Eigen::PermutationMatrix<Eigen::Dynamic> P(7);
    for (int i = 0; i < 7; ++i) P.indices()(i) = perm[static_cast<std::size_t>(i)];
    const Mat Sp = P * S * P.transpose();
    const Mat T = glasso_solve(S, with_lambda(0.1)).theta;
    const Mat Tp = glasso_solve(Sp, with_lambda(0.1)).theta;
    CHECK(max_abs_diff(P.transpose() * Tp * P, T) <= 1e-8);
}

TEST_CASE("solution is symmetric and positive definite") {
    std::mt19937_64 rng(26);
    const Mat S = empirical_covariance(gaussian(20, 10, rng));
    const Mat T = glasso_solve(S, with_lambda(0.1)).theta;
    CHECK(T == T.transpose());
    Eigen::SelfAdjointEigenSolver<Mat> es(T);
    CHECK(es.eigenvalues().minCoeff() > 0.0);
}

TEST_CASE("a large penalty removes every edge") {
    std::mt19937_64 rng(27);
    const Mat S = empirical_covariance(gaussian(50, 6, rng));
    const double lambda = S.cwiseAbs().maxCoeff() * 1.01;
    CHECK(edge_set(glasso_solve(S, with_lambda(lambda)).theta).empty());
}

TEST_CASE("singular covariance") {
    std::mt19937_64 rng(28);
    const Mat S = empirical_covariance(gaussian(3, 6, rng));
    CHECK_THROWS_AS(glasso_solve(S, with_lambda(0.0)), DefinitenessError);
    const auto sol = glasso_solve(S, with_lambda(0.1));
    CHECK(sol.theta.allFinite());
}

TEST_CASE("non-symmetric covariance is rejected") {
    Mat S = Mat::Identity(3, 3);
    S(0, 1) = 0.4;
    CHECK_THROWS(glasso_solve(S, with_lambda(0.1)));
}

TEST_CASE("edge set of the identity is empty") { CHECK(edge_set(Mat::Identity(5, 5)).empty()); }

TEST_CASE("edge set of a 2x2 coupling") {
    Mat T(2, 2);
    T << 2, 1, 1, 2;
    CHECK(edge_set(T, 1e-4) == EdgeSet{{0, 1}});
}

TEST_CASE("edge set equals an entrywise scan") {
    std::mt19937_64 rng(29);
    for (int t = 0; t < 10; ++t) {
        Mat T = Mat::Zero(8, 8);
        const Mat u = uniform(8, 8, rng, -1.0, 1.0);
        for (int i = 0; i < 8; ++i)
            for (int j = i + 1; j < 8; ++j)
                if (std::abs(u(i, j)) < 0.3) T(i, j) = T(j, i) = u(i, j) * 0.5;
        T.diagonal().setConstant(4.0);
        EdgeSet scan;
        for (int i = 0; i < 8; ++i)
            for (int j = i + 1; j < 8; ++j)
                if (std::abs(T(i, j)) > 0.05) scan.emplace(i, j);
        CHECK(edge_set(T, 0.05) == scan);
    }
}

}  // TEST_SUITE

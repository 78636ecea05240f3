#include "mdicke/analysis.hpp"

#include <doctest.h>

#include <cmath>
#include <random>
#include <utility>
#include <vector>

using namespace mdicke;

TEST_CASE("exact logarithmic data is recovered exactly")
{
    std::vector<std::pair<double, double>> pts;
    for (int n = 8; n <= 256; n *= 2) pts.emplace_back(n, 0.59 + 0.1428 * std::log(n));
    const ScalingFit fit = fit_log_scaling(pts);
    CHECK(fit.s0 == doctest::Approx(0.59).epsilon(1e-13));
    CHECK(fit.s1 == doctest::Approx(0.1428).epsilon(1e-13));
    CHECK(fit.r2 == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(fit.se_s1 < 1e-12);
    CHECK(fit.n_min == 8);
    CHECK(fit.n_max == 256);
    for (double r : fit.residuals) CHECK(std::abs(r) < 1e-13);
}

TEST_CASE("fit statistics against the normal equations")
{
    std::mt19937_64 rng(3);
    std::normal_distribution<double> noise(0.0, 0.01);
    std::vector<std::pair<double, double>> pts;
    for (int n = 4; n <= 512; n *= 2) pts.emplace_back(n, 0.3 + 0.2 * std::log(n) + noise(rng));
    const ScalingFit fit = fit_log_scaling(pts);

    Eigen::MatrixXd x(pts.size(), 2);
    Eigen::VectorXd y(pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i) {
        x(i, 0) = 1.0;
        x(i, 1) = std::log(pts[i].first);
        y(i) = pts[i].second;
    }
    const Eigen::MatrixXd xtx = x.transpose() * x;
    const Eigen::VectorXd beta = xtx.ldlt().solve(x.transpose() * y);
    const Eigen::VectorXd r = y - x * beta;
    const double sigma2 = r.squaredNorm() / (pts.size() - 2.0);
    const Eigen::MatrixXd cov = sigma2 * xtx.inverse();
    CHECK(fit.s0 == doctest::Approx(beta(0)).epsilon(1e-12));
    CHECK(fit.s1 == doctest::Approx(beta(1)).epsilon(1e-12));
    CHECK(fit.se_s0 == doctest::Approx(std::sqrt(cov(0, 0))).epsilon(1e-10));
    CHECK(fit.se_s1 == doctest::Approx(std::sqrt(cov(1, 1))).epsilon(1e-10));
    CHECK(fit.covariance[0][1] == doctest::Approx(cov(0, 1)).epsilon(1e-10));
    const double syy = (y.array() - y.mean()).square().sum();
    CHECK(fit.r2 == doctest::Approx(1.0 - r.squaredNorm() / syy).epsilon(1e-12));
}

TEST_CASE("upper-half refit")
{
    std::vector<std::pair<double, double>> pts;
    for (int n = 8; n <= 256; n *= 2) pts.emplace_back(n, std::log(n) * std::log(n));
    const auto upper = fit_upper_half(pts);
    REQUIRE(upper);
    CHECK(upper->n_min == 32);
    CHECK(upper->n_max == 256);
    CHECK(upper->s1 > fit_log_scaling(pts).s1);  // convex data: steeper at large N

    const std::vector<std::pair<double, double>> four(pts.begin(), pts.begin() + 4);
    CHECK_FALSE(fit_upper_half(four).has_value());
}

TEST_CASE("fit preconditions")
{
    const std::vector<std::pair<double, double>> few{{8, 1.0}, {16, 1.1}, {32, 1.2}};
    CHECK_THROWS_AS(fit_log_scaling(few), InputError);
    const std::vector<std::pair<double, double>> unordered{{8, 1.0}, {32, 1.1}, {16, 1.2}, {64, 1.3}};
    CHECK_THROWS_AS(fit_log_scaling(unordered), InputError);
    const std::vector<std::pair<double, double>> nonpositive{{0, 1.0}, {2, 1.1}, {4, 1.2}, {8, 1.3}};
    CHECK_THROWS_AS(fit_log_scaling(nonpositive), InputError);
}

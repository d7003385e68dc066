#include "oracles.hpp"
#include "relrep/errors.hpp"
#include "relrep/stat_kernel.hpp"

#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>

using namespace relrep;

TEST_CASE("t_cdf: examples") {
    CHECK(t_cdf(0.0, 7) == 0.5);
    // Integration oracle value, frozen.
    CHECK(static_cast<double>(oracle::t_cdf(2.364624L, 7.0L)) == doctest::Approx(0.97499999075).epsilon(1e-10));
    CHECK(t_cdf(2.364624, 7) == doctest::Approx(0.9749999907479).epsilon(1e-11));
    CHECK(std::fabs(t_cdf(1e6, 3) - 1.0) < 1e-12);
}

TEST_CASE("t_cdf: domain errors") {
    CHECK_THROWS_AS(t_cdf(std::numeric_limits<double>::quiet_NaN(), 5), DomainError);
    CHECK_THROWS_AS(t_cdf(std::numeric_limits<double>::infinity(), 5), DomainError);
    CHECK_THROWS_AS(t_cdf(1.0, 0.0), DomainError);
    CHECK_THROWS_AS(t_cdf(1.0, -2.0), DomainError);
}

TEST_CASE("t_cdf agrees with the quadrature oracle") {
    for (double df : {1.0, 2.5, 7.0, 30.0, 250.0}) {
        for (double x : {-8.0, -2.0, -0.3, 0.1, 1.0, 2.5, 6.0, 40.0}) {
            const double expected = static_cast<double>(oracle::t_cdf(x, df));
            CHECK(std::fabs(t_cdf(x, df) - expected) < 1e-12);
        }
    }
}

TEST_CASE("t_cdf: symmetry and monotonicity") {
    std::mt19937_64 gen(11);
    std::uniform_real_distribution<double> xs(-20.0, 20.0);
    std::uniform_real_distribution<double> dfs(1.0, 200.0);
    for (int i = 0; i < 2000; ++i) {
        const double x = xs(gen);
        const double df = dfs(gen);
        CHECK(std::fabs(t_cdf(-x, df) - (1.0 - t_cdf(x, df))) < 1e-14);
        CHECK(t_cdf(x + 0.01, df) >= t_cdf(x, df));
    }
}

TEST_CASE("t_quantile: examples") {
    CHECK(t_quantile(0.5, 12) == 0.0);
    CHECK(t_quantile(0.975, 7) == doctest::Approx(2.3646242515927844).epsilon(1e-12));
    CHECK(t_quantile(0.975, 14) == doctest::Approx(2.1447866879169273).epsilon(1e-12));
    CHECK(t_quantile(0.995, 1) == doctest::Approx(63.65674116287399).epsilon(1e-10));
    CHECK(t_quantile(0.025, 7) == doctest::Approx(-2.3646242515927844).epsilon(1e-12));
}

TEST_CASE("t_quantile: errors") {
    CHECK_THROWS_AS(t_quantile(0.0, 5), DomainError);
    CHECK_THROWS_AS(t_quantile(1.0, 5), DomainError);
    CHECK_THROWS_AS(t_quantile(-0.1, 5), DomainError);
    CHECK_THROWS_AS(t_quantile(0.5, 0.0), DomainError);
}

TEST_CASE("t_quantile inverts t_cdf") {
    std::mt19937_64 gen(5);
    std::uniform_real_distribution<double> ps(1e-6, 1.0 - 1e-6);
    std::uniform_real_distribution<double> dfs(1.0, 1000.0);
    for (int i = 0; i < 3000; ++i) {
        const double p = ps(gen);
        const double df = dfs(gen);
        CHECK(std::fabs(t_cdf(t_quantile(p, df), df) - p) < 1e-9);
    }
}

TEST_CASE("round trip x -> cdf -> quantile") {
    std::mt19937_64 gen(17);
    std::uniform_real_distribution<double> xs(-10.0, 10.0);
    std::uniform_real_distribution<double> dfs(1.0, 1000.0);
    for (int i = 0; i < 3000; ++i) {
        const double x = xs(gen);
        const double df = dfs(gen);
        // Upper-tail cdf values round to 1.0; go through the lower tail.
        const double back = -t_quantile(t_cdf(-std::fabs(x), df), df);
        CHECK(std::fabs(back - std::fabs(x)) <= 1e-6 * std::max(1.0, std::fabs(x)));
    }
}

TEST_CASE("t_quantile converges to the normal quantile") {
    const double z = normal_quantile(0.975);
    for (double df : {1e4, 5e4, 1e6}) {
        CHECK(std::fabs(t_quantile(0.975, df) - z) < 0.002);
    }
    CHECK(t_quantile(0.975, std::numeric_limits<double>::infinity()) == z);
}

TEST_CASE("normal_cdf: examples against the erf series oracle") {
    CHECK(normal_cdf(0.0) == 0.5);
    CHECK(normal_cdf(2.771859) == doctest::Approx(0.99723).epsilon(1e-5));
    CHECK(normal_cdf(1.96) == doctest::Approx(0.9750021048517795).epsilon(1e-12));
    for (double x : {-5.0, -2.2, -0.7, 0.4, 1.3, 2.771859, 4.5}) {
        CHECK(std::fabs(normal_cdf(x) - static_cast<double>(oracle::normal_cdf(x))) < 1e-9);
    }
    CHECK_THROWS_AS(normal_cdf(std::numeric_limits<double>::infinity()), DomainError);
}

TEST_CASE("normal_quantile inverts normal_cdf") {
    for (double p : {1e-10, 1e-4, 0.01, 0.02425, 0.2, 0.5, 0.8, 0.975, 0.999, 1.0 - 1e-9}) {
        CHECK(normal_cdf(normal_quantile(p)) == doctest::Approx(p).epsilon(1e-12));
    }
}

TEST_CASE("study_from_t") {
    const StudySummary s153 = study_from_t(4.45, 8, TestKind::single);
    CHECK(s153.eff == doctest::Approx(0.787).epsilon(6e-4));
    CHECK(s153.se == doctest::Approx(0.17678).epsilon(1e-4));
    CHECK(s153.df == 7.0);

    CHECK(study_from_t(10.18, 100, TestKind::paired).eff == doctest::Approx(0.509));

    const StudySummary zero = study_from_t(0.0, 25, TestKind::paired);
    CHECK(zero.eff == 0.0);
    CHECK(zero.se == doctest::Approx(0.1));
    CHECK(zero.df == 24.0);

    CHECK_THROWS_AS(study_from_t(1.0, 1, TestKind::single), DomainError);
}

TEST_CASE("study_from_t is linear in t at fixed n") {
    const double base = study_from_t(1.0, 40, TestKind::paired).eff;
    for (double t : {-3.0, 0.5, 2.0, 17.0}) {
        CHECK(study_from_t(t, 40, TestKind::paired).eff == doctest::Approx(t * base).epsilon(1e-14));
    }
}

TEST_CASE("incomplete beta edge values") {
    CHECK(incomplete_beta(2.0, 3.0, 0.0) == 0.0);
    CHECK(incomplete_beta(2.0, 3.0, 1.0) == 1.0);
    // I_x(1, 1) = x
    CHECK(incomplete_beta(1.0, 1.0, 0.37) == doctest::Approx(0.37).epsilon(1e-14));
    // I_x(a, 1) = x^a
    CHECK(incomplete_beta(3.5, 1.0, 0.6) == doctest::Approx(std::pow(0.6, 3.5)).epsilon(1e-13));
    CHECK_THROWS_AS(incomplete_beta(0.0, 1.0, 0.5), DomainError);
    CHECK_THROWS_AS(incomplete_beta(1.0, 1.0, 1.5), DomainError);
}

TEST_CASE("two-sided p-value") {
    CHECK(t_two_sided_p(0.0, 10) == 1.0);
    CHECK(t_two_sided_p(2.3646242515927844, 7) == doctest::Approx(0.05).epsilon(1e-10));
    CHECK(t_two_sided_p(-2.3646242515927844, 7) == doctest::Approx(0.05).epsilon(1e-10));
}

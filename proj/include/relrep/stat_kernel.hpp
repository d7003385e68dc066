#pragma once

#include <string_view>

// Distribution kernels and study summaries.
//
// The Student t distribution is evaluated through the regularized incomplete
// beta function (Lentz continued fraction); quantiles use a bracketed
// Newton/bisection hybrid on the cdf. df = +infinity is accepted and means the
// standard normal limit.

namespace relrep {

enum class TestKind { single, paired };

std::string_view to_string(TestKind kind);
TestKind parse_test_kind(std::string_view label);

/// Summary of one study on the standardized effect scale, eff = theta / (2 sigma).
struct StudySummary {
    double eff = 0.0;
    double se = 0.0;
    double df = 0.0;
    int n = 0;
    TestKind kind = TestKind::single;
};

/// Validates the StudySummary invariants (se > 0, df >= 1, n >= 2); throws DomainError.
void validate(const StudySummary& study);

double log_beta(double a, double b);

/// Regularized incomplete beta I_x(a, b).
double incomplete_beta(double a, double b, double x);

double t_pdf(double x, double df);
double t_cdf(double x, double df);
double t_quantile(double p, double df);

double normal_pdf(double x);
double normal_cdf(double x);
double normal_quantile(double p);

/// Two-sided p-value of a t statistic.
double t_two_sided_p(double t, double df);

/// Quantile used for a two-sided interval at confidence `level` with `df` degrees of freedom.
double two_sided_quantile(double level, double df);

/// eff = t / (2 sqrt(n)), se = 1 / (2 sqrt(n)), df = n - 1.
StudySummary study_from_t(double t, int n, TestKind kind);

} // namespace relrep

#include "relrep/stat_kernel.hpp"

#include "relrep/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace relrep {

namespace {

constexpr int kMaxContinuedFractionTerms = 500;
constexpr double kTiny = 1e-300;

void require_finite(double x, const char* what) {
    if (!std::isfinite(x)) {
        throw DomainError(std::string(what) + " must be finite");
    }
}

void require_df(double df) {
    if (std::isnan(df) || df <= 0.0) {
        throw DomainError("degrees of freedom must be positive");
    }
}

// Modified Lentz evaluation of the continued fraction for I_x(a, b).
double beta_continued_fraction(double a, double b, double x) {
    const double qab = a + b;
    const double qap = a + 1.0;
    const double qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::fabs(d) < kTiny) d = kTiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= kMaxContinuedFractionTerms; ++m) {
        const double m2 = 2.0 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < 1e-16) {
            return h;
        }
    }
    return h;
}

// Upper tail P(T > x) for x >= 0.
double t_upper_tail(double x, double df) {
    if (std::isinf(df)) {
        return 0.5 * std::erfc(x / std::numbers::sqrt2);
    }
    // Not 0.5 - 0.5 I(1/2, df/2, x^2/(df+x^2)): that cancels to 0 in the far
    // tail. incomplete_beta already picks the stable side of its own argument.
    return 0.5 * incomplete_beta(0.5 * df, 0.5, df / (df + x * x));
}

// Solves t_upper_tail(x) = tail for x >= 0, tail in (0, 0.5].
double t_upper_quantile(double tail, double df) {
    if (tail >= 0.5) return 0.0;

    double lo = 0.0;
    double hi = std::max(1.0, -normal_quantile(tail));
    while (t_upper_tail(hi, df) > tail) {
        lo = hi;
        hi *= 2.0;
        if (!std::isfinite(hi)) return std::numeric_limits<double>::infinity();
    }

    double x = 0.5 * (lo + hi);
    for (int iter = 0; iter < 300; ++iter) {
        const double f = t_upper_tail(x, df) - tail;
        if (f == 0.0) return x;
        if (f > 0.0) {
            lo = x;
        } else {
            hi = x;
        }
        if (hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, hi)) {
            break;
        }
        const double density = t_pdf(x, df);
        double next = density > 0.0 ? x + f / density : 0.5 * (lo + hi);
        if (!(next > lo && next < hi)) {
            next = 0.5 * (lo + hi);
        }
        if (std::fabs(next - x) <= 1e-15 * std::max(1.0, std::fabs(x))) {
            return next;
        }
        x = next;
    }
    return 0.5 * (lo + hi);
}

} // namespace

std::string_view to_string(TestKind kind) {
    switch (kind) {
    case TestKind::single: return "single";
    case TestKind::paired: return "paired";
    }
    return "single";
}

TestKind parse_test_kind(std::string_view label) {
    if (label == "single") return TestKind::single;
    if (label == "paired") return TestKind::paired;
    throw UsageError("unknown test kind '" + std::string(label) + "' (expected single or paired)");
}

void validate(const StudySummary& study) {
    if (!(study.se > 0.0)) throw DomainError("standard error must be positive");
    if (!(study.df >= 1.0)) throw DomainError("degrees of freedom must be at least 1");
    if (study.n < 2) throw DomainError("sample size must be at least 2");
    require_finite(study.eff, "effect");
}

double log_beta(double a, double b) {
    return std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b);
}

double incomplete_beta(double a, double b, double x) {
    if (!(a > 0.0) || !(b > 0.0)) throw DomainError("incomplete beta requires a, b > 0");
    if (std::isnan(x) || x < 0.0 || x > 1.0) throw DomainError("incomplete beta requires x in [0, 1]");
    if (x == 0.0) return 0.0;
    if (x == 1.0) return 1.0;

    const double front = std::exp(a * std::log(x) + b * std::log1p(-x) - log_beta(a, b));
    if (x < (a + 1.0) / (a + b + 2.0)) {
        return front * beta_continued_fraction(a, b, x) / a;
    }
    return 1.0 - front * beta_continued_fraction(b, a, 1.0 - x) / b;
}

double t_pdf(double x, double df) {
    require_finite(x, "x");
    require_df(df);
    if (std::isinf(df)) return normal_pdf(x);
    const double log_norm = std::lgamma(0.5 * (df + 1.0)) - std::lgamma(0.5 * df)
                            - 0.5 * std::log(df * std::numbers::pi);
    return std::exp(log_norm - 0.5 * (df + 1.0) * std::log1p(x * x / df));
}

double t_cdf(double x, double df) {
    require_finite(x, "x");
    require_df(df);
    if (x == 0.0) return 0.5;
    const double tail = t_upper_tail(std::fabs(x), df);
    return x > 0.0 ? 1.0 - tail : tail;
}

double t_quantile(double p, double df) {
    require_df(df);
    if (!(p > 0.0 && p < 1.0)) throw DomainError("probability must lie in (0, 1)");
    if (p == 0.5) return 0.0;
    if (std::isinf(df)) return normal_quantile(p);
    return p > 0.5 ? t_upper_quantile(1.0 - p, df) : -t_upper_quantile(p, df);
}

double normal_pdf(double x) {
    return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi);
}

double normal_cdf(double x) {
    require_finite(x, "x");
    return 0.5 * std::erfc(-x / std::numbers::sqrt2);
}

// Acklam's rational approximation followed by one Halley step against erfc.
double normal_quantile(double p) {
    if (!(p > 0.0 && p < 1.0)) throw DomainError("probability must lie in (0, 1)");

    static constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                   -2.759285104469687e+02, 1.383577518672690e+02,
                                   -3.066479806614716e+01, 2.506628277459239e+00};
    static constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                   -1.556989798598866e+02, 6.680131188771972e+01,
                                   -1.328068155288572e+01};
    static constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                   -2.400758277161838e+00, -2.549732539343734e+00,
                                   4.374664141464968e+00,  2.938163982698783e+00};
    static constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                                   2.445134137142996e+00, 3.754408661907416e+00};
    constexpr double p_low = 0.02425;

    double x;
    if (p < p_low) {
        const double q = std::sqrt(-2.0 * std::log(p));
        x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5])
            / ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    } else if (p <= 1.0 - p_low) {
        const double q = p - 0.5;
        const double r = q * q;
        x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q
            / (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
    } else {
        const double q = std::sqrt(-2.0 * std::log1p(-p));
        x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5])
            / ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }

    const double e = 0.5 * std::erfc(-x / std::numbers::sqrt2) - p;
    const double u = e * std::sqrt(2.0 * std::numbers::pi) * std::exp(0.5 * x * x);
    return x - u / (1.0 + 0.5 * x * u);
}

double t_two_sided_p(double t, double df) {
    require_finite(t, "t statistic");
    require_df(df);
    return std::min(1.0, 2.0 * t_upper_tail(std::fabs(t), df));
}

double two_sided_quantile(double level, double df) {
    if (!(level > 0.0 && level < 1.0)) throw DomainError("confidence level must lie in (0, 1)");
    return t_quantile(0.5 * (1.0 + level), df);
}

StudySummary study_from_t(double t, int n, TestKind kind) {
    if (n < 2) throw DomainError("sample size must be at least 2");
    require_finite(t, "t statistic");
    const double root = 2.0 * std::sqrt(static_cast<double>(n));
    return StudySummary{t / root, 1.0 / root, static_cast<double>(n - 1), n, kind};
}

} // namespace relrep

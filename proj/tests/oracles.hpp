#pragma once

// Test-only reference computations, independent of the library's
// incomplete-beta / rational-approximation code paths.

#include <cmath>
#include <functional>
#include <numbers>

namespace relrep::oracle {

inline long double t_density(long double x, long double df) {
    const long double c = std::exp(std::lgamma((df + 1.0L) / 2.0L) - std::lgamma(df / 2.0L))
                          / std::sqrt(df * std::numbers::pi_v<long double>);
    return c * std::pow(1.0L + x * x / df, -(df + 1.0L) / 2.0L);
}

inline long double simpson_step(const std::function<long double(long double)>& f, long double a,
                                long double b, long double fa, long double fm, long double fb,
                                long double whole, long double tol, int depth) {
    const long double m = 0.5L * (a + b);
    const long double lm = 0.5L * (a + m);
    const long double rm = 0.5L * (m + b);
    const long double flm = f(lm);
    const long double frm = f(rm);
    const long double left = (m - a) / 6.0L * (fa + 4.0L * flm + fm);
    const long double right = (b - m) / 6.0L * (fm + 4.0L * frm + fb);
    const long double delta = left + right - whole;
    if (depth <= 0 || std::fabs(delta) <= 15.0L * tol) return left + right + delta / 15.0L;
    return simpson_step(f, a, m, fa, flm, fm, left, tol / 2.0L, depth - 1)
           + simpson_step(f, m, b, fm, frm, fb, right, tol / 2.0L, depth - 1);
}

/// Adaptive Simpson quadrature of f over [a, b].
inline long double integrate(const std::function<long double(long double)>& f, long double a,
                             long double b, long double tol = 1e-14L) {
    const long double fa = f(a);
    const long double fb = f(b);
    const long double fm = f(0.5L * (a + b));
    const long double whole = (b - a) / 6.0L * (fa + 4.0L * fm + fb);
    return simpson_step(f, a, b, fa, fm, fb, whole, tol, 60);
}

/// P(T <= x) = 1/2 + integral_0^x density. Long ranges are split into pieces
/// so the quadrature tolerance stays meaningful in the heavy tail.
inline long double t_cdf(long double x, long double df) {
    const auto f = [df](long double u) { return t_density(u, df); };
    const long double ax = std::fabs(x);
    long double sum = 0.0L;
    long double lo = 0.0L;
    long double width = 0.5L;
    while (lo < ax) {
        const long double hi = std::min(ax, lo + width);
        sum += integrate(f, lo, hi, 1e-16L);
        lo = hi;
        width *= 1.5L;
    }
    return x >= 0 ? 0.5L + sum : 0.5L - sum;
}

/// Bisection on the integration oracle, after bracketing by doubling.
inline double t_quantile(double p, double df) {
    if (p < 0.5) return -t_quantile(1.0 - p, df);
    long double lo = 0.0L;
    long double hi = 1.0L;
    while (t_cdf(hi, df) < p) {
        lo = hi;
        hi *= 2.0L;
    }
    for (int i = 0; i < 200 && hi - lo > 1e-12L; ++i) {
        const long double mid = 0.5L * (lo + hi);
        if (t_cdf(mid, df) < p) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return static_cast<double>(0.5L * (lo + hi));
}

/// Normal cdf from the Maclaurin series of erf (|x| <= 6).
inline long double normal_cdf(long double x) {
    const long double z = x / std::numbers::sqrt2_v<long double>;
    long double term = z;
    long double sum = z;
    for (int n = 1; n < 400; ++n) {
        term *= -z * z / n;
        const long double add = term / (2 * n + 1);
        sum += add;
        if (std::fabs(add) < 1e-30L) break;
    }
    return 0.5L + sum / std::sqrt(std::numbers::pi_v<long double>);
}

} // namespace relrep::oracle

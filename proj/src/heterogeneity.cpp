#include "relrep/heterogeneity.hpp"

#include "relrep/errors.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace relrep {

std::string_view to_string(BsvFormula formula) {
    switch (formula) {
    case BsvFormula::printed: return "printed";
    case BsvFormula::moment_consistent: return "moment-consistent";
    }
    return "printed";
}

double bsv_point(double eds_hat, int n_o, int n_r, BsvFormula formula) {
    if (n_o < 2 || n_r < 2) throw DomainError("sample sizes must be at least 2");
    const double sampling = 1.0 / n_o + 1.0 / n_r;
    const double squared = formula == BsvFormula::printed
                               ? (eds_hat * eds_hat - sampling) / 2.0
                               : 2.0 * (eds_hat * eds_hat - sampling / 4.0);
    return std::sqrt(std::max(0.0, squared));
}

HeterogeneityEstimate pool_effects(std::span<const StudySummary> studies, bool include_original,
                                   double level) {
    std::span<const StudySummary> used = studies;
    if (!include_original && !used.empty()) used = used.subspan(1);
    if (used.size() < 2) {
        throw InsufficientDataError(
            "pooling needs at least 2 studies after excluding the original; between-study "
            "variance is not estimable from fewer replications");
    }
    for (const StudySummary& s : used) validate(s);

    std::vector<double> weights;
    weights.reserve(used.size());
    double sum_w = 0.0;
    double sum_w2 = 0.0;
    double sum_wy = 0.0;
    for (const StudySummary& s : used) {
        const double w = 1.0 / (s.se * s.se);
        weights.push_back(w);
        sum_w += w;
        sum_w2 += w * w;
        sum_wy += w * s.eff;
    }
    const double fixed = sum_wy / sum_w;

    double q = 0.0;
    for (std::size_t i = 0; i < used.size(); ++i) {
        const double d = used[i].eff - fixed;
        q += weights[i] * d * d;
    }
    const double k = static_cast<double>(used.size());
    const double c = sum_w - sum_w2 / sum_w;
    const double tau2 = c > 0.0 ? std::max(0.0, (q - (k - 1.0)) / c) : 0.0;

    double sum_ws = 0.0;
    double sum_wsy = 0.0;
    for (const StudySummary& s : used) {
        const double w = 1.0 / (s.se * s.se + tau2);
        sum_ws += w;
        sum_wsy += w * s.eff;
    }

    HeterogeneityEstimate out;
    out.tau2 = tau2;
    out.bsv = 2.0 * std::sqrt(tau2);
    out.theta_hat = sum_wsy / sum_ws;
    out.se = std::sqrt(1.0 / sum_ws);
    out.ci = symmetric_interval(out.theta_hat, normal_quantile(0.5 * (1.0 + level)) * out.se);
    out.k = static_cast<int>(used.size());
    out.q_statistic = q;
    out.original_excluded = !include_original;
    return out;
}

Interval widen_interval(const StudySummary& study, double assumed_bsv, double level) {
    if (!(assumed_bsv >= 0.0)) throw DomainError("assumed BSV must be nonnegative");
    const double q = two_sided_quantile(level, study.df);
    const double between_sd = assumed_bsv / 2.0;
    return symmetric_interval(study.eff, q * std::hypot(study.se, between_sd));
}

} // namespace relrep

#pragma once

#include "relrep/relevance.hpp"
#include "relrep/stat_kernel.hpp"

#include <span>
#include <string_view>

namespace relrep {

/// Which algebraic form of the single-pair BSV point estimate to use.
///   printed:           BSV^2 = (eds^2 - (1/n_o + 1/n_r)) / 2
///   moment_consistent: BSV^2 = 2 (eds^2 - (1/n_o + 1/n_r) / 4), from
///                      var(eds_hat) = (1/n_o + 1/n_r)/4 + BSV^2/2
enum class BsvFormula { printed, moment_consistent };

std::string_view to_string(BsvFormula formula);

/// Between-study variability from one original/replication pair, floored at 0.
double bsv_point(double eds_hat, int n_o, int n_r, BsvFormula formula = BsvFormula::printed);

struct HeterogeneityEstimate {
    double bsv = 0.0;        // sigma_theta / sigma = 2 tau on the standardized scale
    double tau2 = 0.0;
    double theta_hat = 0.0;
    double se = 0.0;
    Interval ci;
    int k = 0;
    double q_statistic = 0.0;
    bool original_excluded = false;
};

/// Random-effects pooling with the DerSimonian-Laird moment estimator of tau^2.
/// `studies[0]` is the original; it is dropped before pooling unless
/// `include_original` is set. The interval uses the normal quantile at `level`.
/// Throws InsufficientDataError if fewer than two studies remain.
HeterogeneityEstimate pool_effects(std::span<const StudySummary> studies, bool include_original,
                                   double level = 0.95);

/// Interval for the global effect from one study, widened by an assumed BSV:
/// half-width q sqrt(se^2 + bsv^2 / 4) with q from the study's df.
Interval widen_interval(const StudySummary& study, double assumed_bsv, double level);

} // namespace relrep

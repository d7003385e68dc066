#pragma once

#include "relrep/replication.hpp"

#include <array>
#include <cstdint>
#include <string_view>

namespace relrep {

/// How study estimates are generated.
///   exact:  n paired differences D_i ~ N(2 theta, 1) are drawn and summarized
///           through the one-sample t statistic (df = n - 1).
///   normal: eff_hat ~ N(theta, 1 / (4 n)) with known scale (df = infinity).
enum class SimModel { exact, normal };

std::string_view to_string(SimModel model);
SimModel parse_sim_model(std::string_view label);

struct SimConfig {
    int n_o = 20;
    int n_r = 20;
    double true_eff = 0.2;
    double bsv = 0.0;
    std::uint64_t n_sims = 10000;
    std::uint64_t seed = 1;
    double alpha = 0.05;
    bool selection = false;
    // The original estimate is set to its true effect instead of being sampled.
    bool original_at_truth = false;
    SimModel model = SimModel::exact;
    double zeta = kDefaultZeta;
    double rho_d = kDefaultRhoD;
    DfPolicy df_policy = DfPolicy::own;
    unsigned threads = 1;
};

/// Throws ConfigError on invalid settings.
void validate(const SimConfig& cfg);

struct Frequency {
    std::uint64_t count = 0;
    std::uint64_t total = 0;

    double rate() const { return total ? static_cast<double>(count) / total : 0.0; }
    /// Monte Carlo standard error sqrt(p (1 - p) / total).
    double mc_se() const;
};

/// Mergeable counts for a contiguous block of iterations.
struct SimTally {
    std::uint64_t iterations = 0;
    std::uint64_t kept = 0;
    std::array<std::uint64_t, 8> outcomes{};
    std::uint64_t outcome_undefined = 0;
    std::uint64_t sigag = 0;
    std::uint64_t osc15_coverage = 0;
    std::uint64_t mutual_coverage = 0;
    std::uint64_t interval_overlap = 0;
    std::uint64_t consistency_reject = 0;
    std::uint64_t covered = 0;
    std::uint64_t covered_widened = 0;
    std::uint64_t eds_sig_positive = 0;
    std::uint64_t eds_sig_negative = 0;
    double sum_published = 0.0;
    double sum_sq_published = 0.0;
    double sum_abs_published = 0.0;

    void merge(const SimTally& other);
};

/// Simulates iterations [first, first + count) of the configured experiment.
SimTally simulate_range(const SimConfig& cfg, std::uint64_t first, std::uint64_t count);

struct SimReport {
    SimConfig config;
    std::uint64_t iterations = 0;
    std::uint64_t kept = 0;
    std::array<Frequency, 8> outcomes{}; // indexed like kAllOutcomes, over realized outcomes
    std::uint64_t outcome_undefined = 0;
    Frequency sigag;
    Frequency osc15_coverage;
    Frequency mutual_coverage;
    Frequency interval_overlap;
    Frequency consistency_reject;
    Frequency coverage;
    Frequency coverage_widened;
    Frequency eds_sig_positive;
    Frequency eds_sig_negative;
    double mean_published_eff = 0.0;
    double mean_published_eff_se = 0.0;
    double mean_abs_published_eff = 0.0;

    const Frequency& outcome(ReplicationOutcome o) const;
};

SimReport make_report(const SimConfig& cfg, const SimTally& tally);

/// Runs cfg.n_sims iterations. Iterations are grouped in fixed blocks that are
/// merged in order, so the report does not depend on cfg.threads.
SimReport run_simulation(const SimConfig& cfg);

/// run_simulation with selection of significant positive originals; requires cfg.selection.
SimReport selection_bias_demo(const SimConfig& cfg);

struct CoverageResult {
    Frequency nominal;
    Frequency widened;
};

/// Coverage of the global effect by the original study's nominal interval,
/// plain and widened by the true BSV.
CoverageResult coverage_under_bsv(const SimConfig& cfg);

/// Smallest effect (with a relative margin of 1e-9) at which a study of size n
/// is two-sided significant at alpha under `model`.
double borderline_effect(int n, double alpha, SimModel model);

} // namespace relrep

#include "relrep/simulate.hpp"

#include "relrep/errors.hpp"
#include "relrep/heterogeneity.hpp"
#include "relrep/rng.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <thread>
#include <vector>

namespace relrep {

namespace {

constexpr std::uint64_t kBlockSize = 4096;
constexpr std::uint64_t kMaxSims = 1'000'000'000'000ULL;

std::size_t outcome_index(ReplicationOutcome outcome) {
    return static_cast<std::size_t>(outcome);
}

StudySummary draw_study(CounterRng& rng, double theta, int n, SimModel model) {
    const double root_n = std::sqrt(static_cast<double>(n));
    if (model == SimModel::normal) {
        const double se = 1.0 / (2.0 * root_n);
        return StudySummary{theta + se * rng.next_normal(), se,
                            std::numeric_limits<double>::infinity(), n, TestKind::paired};
    }
    // Welford over D_i ~ N(2 theta, 1).
    double mean = 0.0;
    double m2 = 0.0;
    for (int i = 1; i <= n; ++i) {
        const double d = 2.0 * theta + rng.next_normal();
        const double delta = d - mean;
        mean += delta / i;
        m2 += delta * (d - mean);
    }
    const double sd = std::sqrt(m2 / (n - 1));
    return study_from_t(mean / (sd / root_n), n, TestKind::paired);
}

StudySummary study_at_truth(double theta, int n, SimModel model) {
    const double se = 1.0 / (2.0 * std::sqrt(static_cast<double>(n)));
    const double df = model == SimModel::normal ? std::numeric_limits<double>::infinity()
                                                : static_cast<double>(n - 1);
    return StudySummary{theta, se, df, n, TestKind::paired};
}

bool significant_positive(const StudySummary& s, double alpha) {
    return s.eff > 0.0 && t_two_sided_p(s.eff / s.se, s.df) < alpha;
}

void simulate_one(const SimConfig& cfg, std::uint64_t index, SimTally& tally) {
    CounterRng rng(derive_key(cfg.seed, index));
    const double level = 1.0 - cfg.alpha;
    const double between_sd = cfg.bsv / 2.0;
    const double theta_o = cfg.true_eff + between_sd * rng.next_normal();
    const double theta_r = cfg.true_eff + between_sd * rng.next_normal();

    ++tally.iterations;
    const StudySummary orig = cfg.original_at_truth ? study_at_truth(theta_o, cfg.n_o, cfg.model)
                                                    : draw_study(rng, theta_o, cfg.n_o, cfg.model);
    if (cfg.selection && !significant_positive(orig, cfg.alpha)) return;
    ++tally.kept;
    tally.sum_published += orig.eff;
    tally.sum_sq_published += orig.eff * orig.eff;
    tally.sum_abs_published += std::fabs(orig.eff);

    const Interval plain = symmetric_interval(orig.eff, two_sided_quantile(level, orig.df) * orig.se);
    if (plain.contains(cfg.true_eff)) ++tally.covered;
    if (widen_interval(orig, cfg.bsv, level).contains(cfg.true_eff)) ++tally.covered_widened;

    const StudySummary repl = draw_study(rng, theta_r, cfg.n_r, cfg.model);
    const StudyIntervals ci = study_intervals(orig, repl, level, cfg.df_policy);
    const EdsSummary eds = eds_summary(orig, repl, level, cfg.df_policy);

    const Interval eds_ci = eds.interval();
    if (eds_ci.lo > 0.0) ++tally.eds_sig_positive;
    if (eds_ci.hi < 0.0) ++tally.eds_sig_negative;

    const LegacyVerdicts legacy =
        legacy_verdicts(orig, ci.original(orig), repl, ci.replication(repl), cfg.alpha);
    tally.sigag += legacy.sigag;
    tally.osc15_coverage += legacy.osc15_coverage;
    tally.mutual_coverage += legacy.mutual_coverage;
    tally.interval_overlap += legacy.interval_overlap;
    tally.consistency_reject += legacy.consistency_p < cfg.alpha;

    const EffectClass orig_class = classify_effect(relevance_triple(orig.eff, ci.ciw_o, cfg.zeta));
    const RelevanceTriple repl_triple = relevance_triple(repl.eff, ci.ciw_r, cfg.zeta);
    const EffectClass repl_class = classify_effect(repl_triple);
    try {
        const ReplicationOutcome outcome =
            replication_outcome(orig_class.row(), repl_class.row(), classify_eds(eds, cfg.rho_d),
                                repl_triple.rle, false);
        ++tally.outcomes[outcome_index(outcome)];
    } catch (const PreconditionError&) {
        ++tally.outcome_undefined;
    } catch (const InconsistencyError&) {
        ++tally.outcome_undefined;
    }
}

Frequency freq(std::uint64_t count, std::uint64_t total) { return Frequency{count, total}; }

} // namespace

std::string_view to_string(SimModel model) {
    return model == SimModel::exact ? "exact" : "normal";
}

SimModel parse_sim_model(std::string_view label) {
    if (label == "exact") return SimModel::exact;
    if (label == "normal") return SimModel::normal;
    throw ConfigError("unknown simulation model '" + std::string(label) + "'");
}

void validate(const SimConfig& cfg) {
    if (cfg.n_o < 2 || cfg.n_r < 2) throw ConfigError("sample sizes must be at least 2");
    if (cfg.n_sims < 1 || cfg.n_sims > kMaxSims) {
        throw ConfigError("n_sims must lie in [1, 1e12]");
    }
    if (!(cfg.alpha > 0.0 && cfg.alpha < 1.0)) throw ConfigError("alpha must lie in (0, 1)");
    if (!(cfg.bsv >= 0.0) || !std::isfinite(cfg.bsv)) throw ConfigError("bsv must be nonnegative");
    if (!std::isfinite(cfg.true_eff)) throw ConfigError("true_eff must be finite");
    if (!(cfg.zeta > 0.0) || !(cfg.rho_d > 0.0)) throw ConfigError("thresholds must be positive");
    if (cfg.threads < 1) throw ConfigError("threads must be at least 1");
}

double Frequency::mc_se() const {
    if (total == 0) return 0.0;
    const double p = rate();
    return std::sqrt(p * (1.0 - p) / static_cast<double>(total));
}

void SimTally::merge(const SimTally& other) {
    iterations += other.iterations;
    kept += other.kept;
    for (std::size_t i = 0; i < outcomes.size(); ++i) outcomes[i] += other.outcomes[i];
    outcome_undefined += other.outcome_undefined;
    sigag += other.sigag;
    osc15_coverage += other.osc15_coverage;
    mutual_coverage += other.mutual_coverage;
    interval_overlap += other.interval_overlap;
    consistency_reject += other.consistency_reject;
    covered += other.covered;
    covered_widened += other.covered_widened;
    eds_sig_positive += other.eds_sig_positive;
    eds_sig_negative += other.eds_sig_negative;
    sum_published += other.sum_published;
    sum_sq_published += other.sum_sq_published;
    sum_abs_published += other.sum_abs_published;
}

SimTally simulate_range(const SimConfig& cfg, std::uint64_t first, std::uint64_t count) {
    SimTally tally;
    for (std::uint64_t i = first; i < first + count; ++i) simulate_one(cfg, i, tally);
    return tally;
}

const Frequency& SimReport::outcome(ReplicationOutcome o) const {
    return outcomes[outcome_index(o)];
}

SimReport make_report(const SimConfig& cfg, const SimTally& tally) {
    SimReport report;
    report.config = cfg;
    report.iterations = tally.iterations;
    report.kept = tally.kept;

    std::uint64_t realized = 0;
    for (std::uint64_t c : tally.outcomes) realized += c;
    for (std::size_t i = 0; i < tally.outcomes.size(); ++i) {
        report.outcomes[i] = freq(tally.outcomes[i], realized);
    }
    report.outcome_undefined = tally.outcome_undefined;

    const std::uint64_t kept = tally.kept;
    report.sigag = freq(tally.sigag, kept);
    report.osc15_coverage = freq(tally.osc15_coverage, kept);
    report.mutual_coverage = freq(tally.mutual_coverage, kept);
    report.interval_overlap = freq(tally.interval_overlap, kept);
    report.consistency_reject = freq(tally.consistency_reject, kept);
    report.coverage = freq(tally.covered, kept);
    report.coverage_widened = freq(tally.covered_widened, kept);
    report.eds_sig_positive = freq(tally.eds_sig_positive, kept);
    report.eds_sig_negative = freq(tally.eds_sig_negative, kept);

    if (kept > 0) {
        const double k = static_cast<double>(kept);
        const double mean = tally.sum_published / k;
        report.mean_published_eff = mean;
        report.mean_abs_published_eff = tally.sum_abs_published / k;
        if (kept > 1) {
            const double var = std::max(0.0, (tally.sum_sq_published - k * mean * mean) / (k - 1.0));
            report.mean_published_eff_se = std::sqrt(var / k);
        }
    }
    return report;
}

SimReport run_simulation(const SimConfig& cfg) {
    validate(cfg);
    const std::uint64_t blocks = (cfg.n_sims + kBlockSize - 1) / kBlockSize;
    std::vector<SimTally> tallies(blocks);

    auto run_block = [&](std::uint64_t b) {
        const std::uint64_t first = b * kBlockSize;
        tallies[b] = simulate_range(cfg, first, std::min(kBlockSize, cfg.n_sims - first));
    };

    const unsigned workers = static_cast<unsigned>(
        std::min<std::uint64_t>(cfg.threads, blocks));
    if (workers <= 1) {
        for (std::uint64_t b = 0; b < blocks; ++b) run_block(b);
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (unsigned w = 0; w < workers; ++w) {
            pool.emplace_back([&, w] {
                for (std::uint64_t b = w; b < blocks; b += workers) run_block(b);
            });
        }
    }

    SimTally total;
    for (const SimTally& t : tallies) total.merge(t);
    return make_report(cfg, total);
}

SimReport selection_bias_demo(const SimConfig& cfg) {
    if (!cfg.selection) throw ConfigError("selection bias demonstration requires selection = true");
    return run_simulation(cfg);
}

CoverageResult coverage_under_bsv(const SimConfig& cfg) {
    const SimReport report = run_simulation(cfg);
    return CoverageResult{report.coverage, report.coverage_widened};
}

double borderline_effect(int n, double alpha, SimModel model) {
    if (n < 2) throw DomainError("sample size must be at least 2");
    if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("alpha must lie in (0, 1)");
    const double df = model == SimModel::normal ? std::numeric_limits<double>::infinity()
                                                : static_cast<double>(n - 1);
    const double critical = t_quantile(1.0 - alpha / 2.0, df);
    return critical * (1.0 + 1e-9) / (2.0 * std::sqrt(static_cast<double>(n)));
}

} // namespace relrep

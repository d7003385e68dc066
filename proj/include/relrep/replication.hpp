#pragma once

#include "relrep/relevance.hpp"
#include "relrep/stat_kernel.hpp"

#include <string>
#include <string_view>
#include <vector>

// Comparison of an original study with its replication on the standardized
// effect scale: the effect difference eds = eff_r - eff_o, its interval and
// classification, the tick ("notch") geometry for interval charts, the
// replication outcome table, and the legacy success criteria.

namespace relrep {

/// Degrees-of-freedom rule for study and eds intervals.
///   own:                study s uses its own df; eds uses df_o + df_r.
///   replication_compat: both study intervals use the replication's df and the
///                       eds half-width is sqrt(ciw_o^2 + ciw_r^2).
enum class DfPolicy { own, replication_compat };

std::string_view to_string(DfPolicy policy);
DfPolicy parse_df_policy(std::string_view label);

/// Default threshold for the standardized effect difference.
inline constexpr double kDefaultRhoD = 0.1;

struct StudyIntervals {
    double df_o = 0.0;
    double df_r = 0.0;
    double ciw_o = 0.0;
    double ciw_r = 0.0;

    Interval original(const StudySummary& orig) const { return symmetric_interval(orig.eff, ciw_o); }
    Interval replication(const StudySummary& repl) const { return symmetric_interval(repl.eff, ciw_r); }
};

/// Half-widths of the two study intervals under a df policy.
StudyIntervals study_intervals(const StudySummary& orig, const StudySummary& repl, double level,
                               DfPolicy policy);

struct EdsSummary {
    double eds = 0.0;
    double se_eds = 0.0;     // sqrt(se_o^2 + se_r^2) = 2 seED
    double halfwidth = 0.0;
    double quantile = 0.0;   // t quantile behind `halfwidth`
    double df_used = 0.0;
    double nu_o = 0.0;       // tick shrink factors, nu_o se_o + nu_r se_r = se_eds
    double nu_r = 0.0;
    double tick_o = 0.0;     // tick half-widths quantile * nu_s * se_s
    double tick_r = 0.0;
    DfPolicy policy = DfPolicy::own;

    Interval interval() const { return symmetric_interval(eds, halfwidth); }
};

EdsSummary eds_summary(const StudySummary& orig, const StudySummary& repl, double level,
                       DfPolicy policy = DfPolicy::own);

/// Gap between the shortened (ticked) intervals; positive exactly when the
/// eds interval excludes zero.
double tick_gap(const StudySummary& orig, const StudySummary& repl, const EdsSummary& summary);

/// Classifies the eds interval against -rho_d: the relevant direction of a
/// discrepancy is an attenuation. Returns one of Rlv, Ngl, Amb, Ctr.
EffectClass classify_eds(const EdsSummary& summary, double rho_d);
EffectClass classify_eds(const Interval& eds_interval, double rho_d);

enum class ReplicationOutcome { Cnf, CnfW, Att, Enh, Amb, Anh, Ctr, Drp };

inline constexpr ReplicationOutcome kAllOutcomes[] = {
    ReplicationOutcome::Cnf, ReplicationOutcome::CnfW, ReplicationOutcome::Att,
    ReplicationOutcome::Enh, ReplicationOutcome::Amb,  ReplicationOutcome::Anh,
    ReplicationOutcome::Ctr, ReplicationOutcome::Drp};

std::string_view to_string(ReplicationOutcome outcome);
ReplicationOutcome parse_replication_outcome(std::string_view label);

/// Outcome table lookup. Rows are the replication's row label, columns the
/// eds class (Rlv | Amb or Ngl | Ctr). A Sig replication with an Amb/Ngl eds
/// counts as CnfW only when rle_repl >= 1.
///
/// Throws PreconditionError when the original was negligible or contradicting,
/// and InconsistencyError for table cells that cannot occur.
ReplicationOutcome replication_outcome(RowLabel orig_class, RowLabel repl_class,
                                       EffectClass eds_class, double rle_repl, bool dropout);

/// True for the annihilation cell with an Amb/Ngl eds after a relevant
/// original, which the outcome table footnotes as not expected to occur.
bool is_annihilation_footnote(RowLabel orig_class, RowLabel repl_class, EffectClass eds_class);

/// Two-sided p-value of T = 2 eds / sqrt(1/n_o + 1/n_r) with df_o + df_r
/// degrees of freedom (n_o + n_r - 2 for t-derived summaries).
double consistency_p(const StudySummary& orig, const StudySummary& repl);

/// orig.eff +- q sqrt(se_o^2 + repl_se^2), q the two-sided t quantile for `df`.
Interval prediction_interval(const StudySummary& orig, double repl_se, double level, double df);
/// Same, with df = df_o + df_r.
Interval prediction_interval(const StudySummary& orig, const StudySummary& repl, double level);

/// Probability, under the normal model with equal effects and equal sizes,
/// that the two `level` intervals overlap as stated by Phi(2 z / sqrt 2).
double overlap_probability(double level);

struct LegacyVerdicts {
    bool sigag = false;
    bool osc15_coverage = false;
    bool mutual_coverage = false;
    bool interval_overlap = false;
    double consistency_p = 1.0;
};

LegacyVerdicts legacy_verdicts(const StudySummary& orig, const Interval& orig_ci,
                               const StudySummary& repl, const Interval& repl_ci, double alpha);

/// Estimate of theta in the general model theta_hat ~ N(theta, V / n).
struct GeneralEstimate {
    double theta = 0.0;
    double variance = 0.0; // V
    int n = 0;
};

/// Interval for 2 ED = theta_r - theta_o with half-width q sqrt(V_o/n_o + V_r/n_r).
/// df = +infinity uses the normal quantile.
Interval general_ed_interval(const GeneralEstimate& orig, const GeneralEstimate& repl, double level,
                             double df);

/// Standardizes an interval for theta_r - theta_o by 2 sqrt(V).
Interval standardize_ed(const Interval& ed2, double variance);

enum class BonnetLabel {
    repl_d,
    repl_es_S,
    non_d,
    non_es_S,
    non_es_W,
    non_d_Null,
    inc_d,
    inc_es_S,
    inc_es_W,
};

std::string_view to_string(BonnetLabel label);
std::string join_labels(const std::vector<BonnetLabel>& labels, char sep = ';');

/// All applicable (partly overlapping) directional and effect-size labels.
std::vector<BonnetLabel> bonnet_labels(const Interval& ci_eff_orig, const Interval& ci_eff_repl,
                                       const Interval& ci_eds, double h);

} // namespace relrep

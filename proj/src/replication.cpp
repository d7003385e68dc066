#include "relrep/replication.hpp"

#include "relrep/errors.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace relrep {

namespace {

void require_level(double level) {
    if (!(level > 0.0 && level < 1.0)) throw DomainError("confidence level must lie in (0, 1)");
}

enum class EdsColumn { relevant, small, contradicting };

EdsColumn eds_column(EffectClass eds_class) {
    switch (eds_class.base()) {
    case EffectLabel::Rlv: return EdsColumn::relevant;
    case EffectLabel::Ctr: return EdsColumn::contradicting;
    default: return EdsColumn::small;
    }
}

std::string_view column_name(EdsColumn column) {
    switch (column) {
    case EdsColumn::relevant: return "Rlv";
    case EdsColumn::small: return "Amb/Ngl";
    case EdsColumn::contradicting: return "Ctr";
    }
    return "?";
}

[[noreturn]] void impossible_cell(RowLabel repl_class, EdsColumn column) {
    throw InconsistencyError("outcome cell (replication " + std::string(to_string(repl_class))
                             + ", eds " + std::string(column_name(column)) + ") cannot occur");
}

bool excludes_zero(const Interval& ci) { return ci.lo > 0.0 || ci.hi < 0.0; }

} // namespace

std::string_view to_string(DfPolicy policy) {
    switch (policy) {
    case DfPolicy::own: return "own";
    case DfPolicy::replication_compat: return "replication-compat";
    }
    return "own";
}

DfPolicy parse_df_policy(std::string_view label) {
    if (label == "own") return DfPolicy::own;
    if (label == "replication-compat") return DfPolicy::replication_compat;
    throw UsageError("unknown df policy '" + std::string(label)
                     + "' (expected own or replication-compat)");
}

StudyIntervals study_intervals(const StudySummary& orig, const StudySummary& repl, double level,
                               DfPolicy policy) {
    require_level(level);
    StudyIntervals out;
    out.df_r = repl.df;
    out.df_o = policy == DfPolicy::own ? orig.df : repl.df;
    out.ciw_o = two_sided_quantile(level, out.df_o) * orig.se;
    out.ciw_r = two_sided_quantile(level, out.df_r) * repl.se;
    return out;
}

EdsSummary eds_summary(const StudySummary& orig, const StudySummary& repl, double level,
                       DfPolicy policy) {
    require_level(level);
    validate(orig);
    validate(repl);

    EdsSummary out;
    out.policy = policy;
    out.eds = repl.eff - orig.eff;
    out.se_eds = std::hypot(orig.se, repl.se);
    if (policy == DfPolicy::own) {
        out.df_used = orig.df + repl.df;
        out.quantile = two_sided_quantile(level, out.df_used);
        out.halfwidth = out.quantile * out.se_eds;
    } else {
        const StudyIntervals ci = study_intervals(orig, repl, level, policy);
        out.df_used = repl.df;
        out.quantile = two_sided_quantile(level, out.df_used);
        out.halfwidth = std::hypot(ci.ciw_o, ci.ciw_r);
    }
    const double nu = out.se_eds / (orig.se + repl.se);
    out.nu_o = nu;
    out.nu_r = nu;
    out.tick_o = out.quantile * nu * orig.se;
    out.tick_r = out.quantile * nu * repl.se;
    return out;
}

double tick_gap(const StudySummary& orig, const StudySummary& repl, const EdsSummary& summary) {
    if (repl.eff >= orig.eff) {
        return (repl.eff - summary.tick_r) - (orig.eff + summary.tick_o);
    }
    return (orig.eff - summary.tick_o) - (repl.eff + summary.tick_r);
}

EffectClass classify_eds(const Interval& ci, double rho_d) {
    if (!(rho_d > 0.0)) throw DomainError("eds threshold must be positive");
    if (ci.lo > 0.0) return {EffectLabel::Ctr};
    if (ci.hi <= -rho_d) return {EffectLabel::Rlv};
    if (ci.lo > -rho_d) return {EffectLabel::Ngl};
    return {EffectLabel::Amb};
}

EffectClass classify_eds(const EdsSummary& summary, double rho_d) {
    return classify_eds(summary.interval(), rho_d);
}

std::string_view to_string(ReplicationOutcome outcome) {
    switch (outcome) {
    case ReplicationOutcome::Cnf: return "Cnf";
    case ReplicationOutcome::CnfW: return "CnfW";
    case ReplicationOutcome::Att: return "Att";
    case ReplicationOutcome::Enh: return "Enh";
    case ReplicationOutcome::Amb: return "Amb";
    case ReplicationOutcome::Anh: return "Anh";
    case ReplicationOutcome::Ctr: return "Ctr";
    case ReplicationOutcome::Drp: return "Drp";
    }
    return "Amb";
}

ReplicationOutcome parse_replication_outcome(std::string_view label) {
    for (ReplicationOutcome outcome : kAllOutcomes) {
        if (to_string(outcome) == label) return outcome;
    }
    throw UsageError("unknown replication outcome '" + std::string(label) + "'");
}

ReplicationOutcome replication_outcome(RowLabel orig_class, RowLabel repl_class,
                                       EffectClass eds_class, double rle_repl, bool dropout) {
    if (dropout) return ReplicationOutcome::Drp;
    if (orig_class == RowLabel::Ngl || orig_class == RowLabel::Ctr) {
        throw PreconditionError("replication outcome requires an original effect that was "
                                "relevant, significant or ambiguous (got "
                                + std::string(to_string(orig_class)) + ")");
    }

    const EdsColumn column = eds_column(eds_class);
    switch (repl_class) {
    case RowLabel::Rlv:
        switch (column) {
        case EdsColumn::relevant: return ReplicationOutcome::Att;
        case EdsColumn::small: return ReplicationOutcome::Cnf;
        case EdsColumn::contradicting: return ReplicationOutcome::Enh;
        }
        break;
    case RowLabel::Sig:
        switch (column) {
        case EdsColumn::relevant: return ReplicationOutcome::Att;
        case EdsColumn::small:
            return rle_repl >= 1.0 ? ReplicationOutcome::CnfW : ReplicationOutcome::Amb;
        case EdsColumn::contradicting: impossible_cell(repl_class, column);
        }
        break;
    case RowLabel::Amb:
        if (column == EdsColumn::contradicting) impossible_cell(repl_class, column);
        return ReplicationOutcome::Amb;
    case RowLabel::Ngl:
        if (column == EdsColumn::contradicting) impossible_cell(repl_class, column);
        return ReplicationOutcome::Anh;
    case RowLabel::Ctr:
        if (column != EdsColumn::relevant) impossible_cell(repl_class, column);
        return ReplicationOutcome::Ctr;
    }
    impossible_cell(repl_class, column);
}

bool is_annihilation_footnote(RowLabel orig_class, RowLabel repl_class, EffectClass eds_class) {
    return orig_class == RowLabel::Rlv && repl_class == RowLabel::Ngl
           && eds_column(eds_class) == EdsColumn::small;
}

double consistency_p(const StudySummary& orig, const StudySummary& repl) {
    if (orig.n + repl.n <= 2) throw DomainError("consistency test needs n_o + n_r > 2");
    validate(orig);
    validate(repl);
    const double c_n = std::sqrt(1.0 / orig.n + 1.0 / repl.n);
    const double statistic = 2.0 * (repl.eff - orig.eff) / c_n;
    return t_two_sided_p(statistic, orig.df + repl.df);
}

Interval prediction_interval(const StudySummary& orig, double repl_se, double level, double df) {
    require_level(level);
    if (!(repl_se >= 0.0)) throw DomainError("replication standard error must be nonnegative");
    const double q = two_sided_quantile(level, df);
    return symmetric_interval(orig.eff, q * std::hypot(orig.se, repl_se));
}

Interval prediction_interval(const StudySummary& orig, const StudySummary& repl, double level) {
    return prediction_interval(orig, repl.se, level, orig.df + repl.df);
}

double overlap_probability(double level) {
    require_level(level);
    const double z = normal_quantile(0.5 * (1.0 + level));
    return normal_cdf(2.0 * z / std::numbers::sqrt2);
}

LegacyVerdicts legacy_verdicts(const StudySummary& orig, const Interval& orig_ci,
                               const StudySummary& repl, const Interval& repl_ci, double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("alpha must lie in (0, 1)");
    validate(orig);
    validate(repl);

    LegacyVerdicts out;
    const double p_o = t_two_sided_p(orig.eff / orig.se, orig.df);
    const double p_r = t_two_sided_p(repl.eff / repl.se, repl.df);
    const bool same_sign = (orig.eff > 0.0 && repl.eff > 0.0) || (orig.eff < 0.0 && repl.eff < 0.0);
    out.sigag = p_o < alpha && p_r < alpha && same_sign;
    out.osc15_coverage = repl_ci.contains(orig.eff);
    out.mutual_coverage = out.osc15_coverage && orig_ci.contains(repl.eff);
    out.interval_overlap = orig_ci.intersects(repl_ci);
    out.consistency_p = consistency_p(orig, repl);
    return out;
}

Interval general_ed_interval(const GeneralEstimate& orig, const GeneralEstimate& repl, double level,
                             double df) {
    if (!(orig.variance > 0.0) || !(repl.variance > 0.0)) {
        throw DomainError("variances must be positive");
    }
    if (orig.n < 1 || repl.n < 1) throw DomainError("sample sizes must be at least 1");
    const double q = two_sided_quantile(level, df);
    const double halfwidth = q * std::sqrt(orig.variance / orig.n + repl.variance / repl.n);
    return symmetric_interval(repl.theta - orig.theta, halfwidth);
}

Interval standardize_ed(const Interval& ed2, double variance) {
    if (!(variance > 0.0)) throw DomainError("variance must be positive");
    const double scale = 2.0 * std::sqrt(variance);
    return Interval{ed2.lo / scale, ed2.hi / scale};
}

std::string_view to_string(BonnetLabel label) {
    switch (label) {
    case BonnetLabel::repl_d: return "repl.d";
    case BonnetLabel::repl_es_S: return "repl.es.S";
    case BonnetLabel::non_d: return "non.d";
    case BonnetLabel::non_es_S: return "non.es.S";
    case BonnetLabel::non_es_W: return "non.es.W";
    case BonnetLabel::non_d_Null: return "non.d.Null";
    case BonnetLabel::inc_d: return "inc.d";
    case BonnetLabel::inc_es_S: return "inc.es.S";
    case BonnetLabel::inc_es_W: return "inc.es.W";
    }
    return "?";
}

std::string join_labels(const std::vector<BonnetLabel>& labels, char sep) {
    std::string out;
    for (BonnetLabel label : labels) {
        if (!out.empty()) out.push_back(sep);
        out += to_string(label);
    }
    return out;
}

std::vector<BonnetLabel> bonnet_labels(const Interval& ci_eff_orig, const Interval& ci_eff_repl,
                                       const Interval& ci_eds, double h) {
    if (!(h > 0.0)) throw DomainError("equivalence margin must be positive");

    std::vector<BonnetLabel> out;
    const bool both_exclude_zero = excludes_zero(ci_eff_orig) && excludes_zero(ci_eff_repl);
    const bool same_direction = (ci_eff_orig.lo > 0.0) == (ci_eff_repl.lo > 0.0);

    if (both_exclude_zero && same_direction) out.push_back(BonnetLabel::repl_d);
    if (ci_eds.lo > -h && ci_eds.hi < h) out.push_back(BonnetLabel::repl_es_S);
    if (both_exclude_zero && !same_direction) out.push_back(BonnetLabel::non_d);
    if (ci_eds.lo > h || ci_eds.hi < -h) out.push_back(BonnetLabel::non_es_S);
    if (!ci_eds.contains(0.0)) out.push_back(BonnetLabel::non_es_W);
    if (ci_eff_repl.lo > -h && ci_eff_repl.hi < h) out.push_back(BonnetLabel::non_d_Null);
    if (ci_eff_repl.contains(0.0)) out.push_back(BonnetLabel::inc_d);
    if (ci_eds.contains(h) || ci_eds.contains(-h)) out.push_back(BonnetLabel::inc_es_S);
    if (ci_eds.contains(0.0)) out.push_back(BonnetLabel::inc_es_W);
    return out;
}

} // namespace relrep

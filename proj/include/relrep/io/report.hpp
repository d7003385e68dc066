#pragma once

#include "relrep/heterogeneity.hpp"
#include "relrep/io/config.hpp"
#include "relrep/io/csv.hpp"
#include "relrep/replication.hpp"
#include "relrep/simulate.hpp"

#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace relrep::io {

/// Analysis of one original/replication pair. Column names follow the
/// published OSC15 extract (eso, esr, eds, ciwo, ...); everything after
/// `replclass` is an extension.
struct ReportRow {
    std::string study_id;
    double t_o = 0.0;
    int n_o = 0;
    double t_r = 0.0;
    int n_r = 0;
    TestKind test_type = TestKind::single;
    bool dropout = false;
    bool sign_flipped = false;

    // False when the row failed before any numbers could be computed.
    bool computed = false;
    double eso = 0.0;
    double esr = 0.0;
    double eds = 0.0;
    double ciwo = 0.0;
    double ciwr = 0.0;
    double ciwd = 0.0;
    double cidwo = 0.0;
    double cidwr = 0.0;
    EffectClass classo;
    EffectClass classr;
    EffectClass classeds;
    std::optional<ReplicationOutcome> replclass;

    double se_o = 0.0;
    double se_r = 0.0;
    double se_eds = 0.0;
    double nu = 0.0;
    double df_o = 0.0;
    double df_r = 0.0;
    double df_eds = 0.0;
    RelevanceTriple rel_o;
    RelevanceTriple rel_r;
    LegacyVerdicts legacy;
    double bsv_point = 0.0;
    std::vector<BonnetLabel> bonnet;
    bool anh_footnote = false;

    std::string error;
};

ReportRow analyze_record(const StudyRecord& record, const RunConfig& cfg);

/// Row-independent; a failing row carries its message in `error` and never
/// aborts the batch.
std::vector<ReportRow> analyze(std::span<const StudyRecord> records, const RunConfig& cfg);

enum class ReportFormat { csv, json };
ReportFormat parse_report_format(std::string_view label);

/// CSV prints reals with 4 decimals; JSON keeps full double precision.
std::string emit_report(std::span<const ReportRow> rows, ReportFormat format);

/// Header of the CSV report, in column order.
const std::vector<std::string>& report_columns();

/// Reads a CSV report back (for charting or diffing). Extension columns are optional.
std::vector<ReportRow> parse_report_csv(std::istream& in);

std::string sim_report_to_json(const SimReport& report);
std::string heterogeneity_to_json(const HeterogeneityEstimate& estimate);

} // namespace relrep::io

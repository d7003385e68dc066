#include "relrep/io/report.hpp"

#include "relrep/errors.hpp"

#include <fmt/format.h>
#include <json.hpp>

#include <charconv>
#include <cmath>
#include <istream>
#include <iterator>
#include <sstream>

namespace relrep::io {

namespace {

using ordered_json = nlohmann::ordered_json;

std::string fixed4(double v) {
    std::string s = fmt::format("{:.4f}", v);
    if (s == "-0.0000") s = "0.0000";
    return s;
}

std::string_view bool_text(bool b) { return b ? "true" : "false"; }

std::string_view class_text(const EffectClass& c) { return to_string(c.row()); }

ordered_json json_real(double v) {
    if (!std::isfinite(v)) return nullptr;
    return v;
}

ordered_json triple_json(const RelevanceTriple& t) {
    return ordered_json{{"rls", t.rls}, {"rle", t.rle}, {"rlp", t.rlp}, {"zeta", t.zeta}};
}

ordered_json row_json(const ReportRow& r) {
    ordered_json j;
    j["study_id"] = r.study_id;
    j["t_orig"] = r.t_o;
    j["n_orig"] = r.n_o;
    j["t_repl"] = r.t_r;
    j["n_repl"] = r.n_r;
    j["test_type"] = std::string(to_string(r.test_type));
    j["dropout"] = r.dropout;
    j["sign_flipped"] = r.sign_flipped;
    if (r.computed) {
        j["eso"] = r.eso;
        j["esr"] = r.esr;
        j["eds"] = r.eds;
        j["ciwo"] = r.ciwo;
        j["ciwr"] = r.ciwr;
        j["ciwd"] = r.ciwd;
        j["cidwo"] = r.cidwo;
        j["cidwr"] = r.cidwr;
        j["classo"] = std::string(class_text(r.classo));
        j["classr"] = std::string(class_text(r.classr));
        j["classeds"] = std::string(to_string(r.classeds.label));
        j["replclass"] = r.replclass ? ordered_json(std::string(to_string(*r.replclass))) : nullptr;
        j["se_o"] = r.se_o;
        j["se_r"] = r.se_r;
        j["se_eds"] = r.se_eds;
        j["nu"] = r.nu;
        j["df_o"] = json_real(r.df_o);
        j["df_r"] = json_real(r.df_r);
        j["df_eds"] = json_real(r.df_eds);
        j["relevance_orig"] = triple_json(r.rel_o);
        j["relevance_repl"] = triple_json(r.rel_r);
        j["classo_detail"] = std::string(to_string(r.classo.label));
        j["classr_detail"] = std::string(to_string(r.classr.label));
        j["legacy"] = ordered_json{{"sigag", r.legacy.sigag},
                                   {"osc15_coverage", r.legacy.osc15_coverage},
                                   {"mutual_coverage", r.legacy.mutual_coverage},
                                   {"interval_overlap", r.legacy.interval_overlap}};
        j["consistency_p"] = r.legacy.consistency_p;
        j["bsv_point"] = r.bsv_point;
        ordered_json labels = ordered_json::array();
        for (BonnetLabel b : r.bonnet) labels.push_back(std::string(to_string(b)));
        j["bonnet"] = labels;
        j["anh_footnote"] = r.anh_footnote;
    }
    j["error"] = r.error.empty() ? ordered_json(nullptr) : ordered_json(r.error);
    return j;
}

void csv_row(std::string& out, const ReportRow& r) {
    std::vector<std::string> cells;
    cells.reserve(report_columns().size());
    cells.push_back(csv_escape(r.study_id));
    cells.push_back(fixed4(r.t_o));
    cells.push_back(std::to_string(r.n_o));
    cells.push_back(fixed4(r.t_r));
    cells.push_back(std::to_string(r.n_r));
    cells.emplace_back(to_string(r.test_type));
    if (r.computed) {
        for (double v : {r.eso, r.esr, r.eds, r.ciwo, r.ciwr, r.ciwd, r.cidwo, r.cidwr}) {
            cells.push_back(fixed4(v));
        }
        cells.emplace_back(class_text(r.classo));
        cells.emplace_back(class_text(r.classr));
        cells.emplace_back(to_string(r.classeds.label));
        cells.emplace_back(r.replclass ? to_string(*r.replclass) : "");
    } else {
        cells.resize(cells.size() + 12);
    }
    cells.emplace_back(bool_text(r.dropout));
    cells.emplace_back(bool_text(r.sign_flipped));
    if (r.computed) {
        for (double v : {r.se_o, r.se_r, r.se_eds, r.nu, r.df_o, r.df_r, r.df_eds, r.rel_o.rls,
                         r.rel_o.rle, r.rel_o.rlp, r.rel_r.rls, r.rel_r.rle, r.rel_r.rlp}) {
            cells.push_back(fixed4(v));
        }
        cells.emplace_back(to_string(r.classo.label));
        cells.emplace_back(to_string(r.classr.label));
        cells.emplace_back(bool_text(r.legacy.sigag));
        cells.emplace_back(bool_text(r.legacy.osc15_coverage));
        cells.emplace_back(bool_text(r.legacy.mutual_coverage));
        cells.emplace_back(bool_text(r.legacy.interval_overlap));
        cells.push_back(fixed4(r.legacy.consistency_p));
        cells.push_back(fixed4(r.bsv_point));
        cells.push_back(join_labels(r.bonnet, ';'));
        cells.emplace_back(bool_text(r.anh_footnote));
    } else {
        cells.resize(cells.size() + 24);
    }
    cells.push_back(csv_escape(r.error));

    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) out.push_back(',');
        out += cells[i];
    }
    out.push_back('\n');
}

// Lenient real parse for report files: accepts "inf".
double report_real(const CsvLine& row, std::size_t column, std::string_view name) {
    if (column >= row.fields.size()) throw RowError(row.line, "missing column " + std::string(name));
    const std::string& text = row.fields[column];
    if (text == "inf") return INFINITY;
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (text.empty() || ec != std::errc() || ptr != text.data() + text.size()) {
        throw RowError(row.line, "column " + std::string(name) + ": '" + text + "' is not a number");
    }
    return value;
}

EffectClass class_from_row_label(std::string_view text) {
    switch (parse_row_label(text)) {
    case RowLabel::Rlv: return {EffectLabel::Rlv};
    case RowLabel::Sig: return {EffectLabel::AmbSig};
    case RowLabel::Amb: return {EffectLabel::Amb};
    case RowLabel::Ngl: return {EffectLabel::Ngl};
    case RowLabel::Ctr: return {EffectLabel::Ctr};
    }
    return {EffectLabel::Amb};
}

} // namespace

const std::vector<std::string>& report_columns() {
    static const std::vector<std::string> columns = {
        "Study", "to", "no", "tr", "nr", "testType", "eso", "esr", "eds", "ciwo", "ciwr", "ciwd",
        "cidwo", "cidwr", "classo", "classr", "classeds", "replclass",
        // extensions
        "dropout", "sign_flipped", "se_o", "se_r", "se_eds", "nu", "df_o", "df_r", "df_eds",
        "rls_o", "rle_o", "rlp_o", "rls_r", "rle_r", "rlp_r", "classo_detail", "classr_detail",
        "sigag", "osc15_coverage", "mutual_coverage", "interval_overlap", "consistency_p",
        "bsv_point", "bonnet", "anh_footnote", "error"};
    return columns;
}

ReportRow analyze_record(const StudyRecord& record, const RunConfig& cfg) {
    ReportRow row;
    row.study_id = record.study_id;
    row.t_o = record.t_orig;
    row.n_o = record.n_orig;
    row.t_r = record.t_repl;
    row.n_r = record.n_repl;
    row.test_type = record.test_type;
    row.dropout = record.dropout;
    row.sign_flipped = record.sign_flipped;

    try {
        validate(cfg);
        const StudySummary orig = study_from_t(record.t_orig, record.n_orig, record.test_type);
        const StudySummary repl = study_from_t(record.t_repl, record.n_repl, record.test_type);
        const StudyIntervals ci = study_intervals(orig, repl, cfg.level, cfg.df_policy);
        const EdsSummary eds = eds_summary(orig, repl, cfg.level, cfg.df_policy);

        row.eso = orig.eff;
        row.esr = repl.eff;
        row.eds = eds.eds;
        row.ciwo = ci.ciw_o;
        row.ciwr = ci.ciw_r;
        row.ciwd = eds.halfwidth;
        row.cidwo = eds.tick_o;
        row.cidwr = eds.tick_r;
        row.se_o = orig.se;
        row.se_r = repl.se;
        row.se_eds = eds.se_eds;
        row.nu = eds.nu_o;
        row.df_o = ci.df_o;
        row.df_r = ci.df_r;
        row.df_eds = eds.df_used;

        row.rel_o = relevance_triple(orig.eff, ci.ciw_o, cfg.zeta);
        row.rel_r = relevance_triple(repl.eff, ci.ciw_r, cfg.zeta);
        row.classo = classify_effect(row.rel_o);
        row.classr = classify_effect(row.rel_r);
        row.classeds = classify_eds(eds, cfg.rho_d);

        row.legacy = legacy_verdicts(orig, ci.original(orig), repl, ci.replication(repl),
                                     1.0 - cfg.level);
        row.bsv_point = bsv_point(eds.eds, record.n_orig, record.n_repl, cfg.bsv_formula);
        row.bonnet = bonnet_labels(ci.original(orig), ci.replication(repl), eds.interval(), cfg.rho_d);
        row.anh_footnote = is_annihilation_footnote(row.classo.row(), row.classr.row(), row.classeds);
        row.computed = true;

        row.replclass = replication_outcome(row.classo.row(), row.classr.row(), row.classeds,
                                            row.rel_r.rle, record.dropout);
    } catch (const std::exception& e) {
        row.error = e.what();
    }
    return row;
}

std::vector<ReportRow> analyze(std::span<const StudyRecord> records, const RunConfig& cfg) {
    std::vector<ReportRow> rows;
    rows.reserve(records.size());
    for (const StudyRecord& record : records) rows.push_back(analyze_record(record, cfg));
    return rows;
}

ReportFormat parse_report_format(std::string_view label) {
    if (label == "csv") return ReportFormat::csv;
    if (label == "json") return ReportFormat::json;
    throw UsageError("unknown report format '" + std::string(label) + "' (expected csv or json)");
}

std::string emit_report(std::span<const ReportRow> rows, ReportFormat format) {
    if (format == ReportFormat::json) {
        ordered_json doc = ordered_json::array();
        for (const ReportRow& r : rows) doc.push_back(row_json(r));
        return doc.dump(2) + "\n";
    }
    std::string out;
    const auto& columns = report_columns();
    for (std::size_t i = 0; i < columns.size(); ++i) {
        if (i) out.push_back(',');
        out += columns[i];
    }
    out.push_back('\n');
    for (const ReportRow& r : rows) csv_row(out, r);
    return out;
}

std::vector<ReportRow> parse_report_csv(std::istream& in) {
    const std::vector<CsvLine> lines = read_csv(in);
    if (lines.empty()) throw SchemaError("missing header row");
    const CsvHeader header(lines.front());

    std::vector<ReportRow> rows;
    for (auto it = std::next(lines.begin()); it != lines.end(); ++it) {
        const CsvLine& line = *it;
        auto text = [&](std::string_view name) -> std::string {
            if (!header.has(name)) return {};
            const std::size_t c = header.require(name);
            return c < line.fields.size() ? line.fields[c] : std::string();
        };
        auto real = [&](std::string_view name) { return report_real(line, header.require(name), name); };
        auto flag = [&](std::string_view name) { return text(name) == "true"; };

        ReportRow r;
        r.study_id = line.fields.at(header.require("Study"));
        r.t_o = real("to");
        r.n_o = parse_cell_int(line, header.require("no"), "no");
        r.t_r = real("tr");
        r.n_r = parse_cell_int(line, header.require("nr"), "nr");
        r.test_type = parse_test_kind(text("testType"));
        r.dropout = flag("dropout");
        r.sign_flipped = flag("sign_flipped");
        r.error = text("error");

        r.computed = !text("eso").empty();
        if (r.computed) {
            r.eso = real("eso");
            r.esr = real("esr");
            r.eds = real("eds");
            r.ciwo = real("ciwo");
            r.ciwr = real("ciwr");
            r.ciwd = real("ciwd");
            r.cidwo = real("cidwo");
            r.cidwr = real("cidwr");
            const std::string detail_o = text("classo_detail");
            const std::string detail_r = text("classr_detail");
            r.classo = detail_o.empty() ? class_from_row_label(text("classo"))
                                        : EffectClass{parse_effect_label(detail_o)};
            r.classr = detail_r.empty() ? class_from_row_label(text("classr"))
                                        : EffectClass{parse_effect_label(detail_r)};
            r.classeds = EffectClass{parse_effect_label(text("classeds"))};
            const std::string outcome = text("replclass");
            if (!outcome.empty()) r.replclass = parse_replication_outcome(outcome);

            if (header.has("se_o") && !text("se_o").empty()) {
                r.se_o = real("se_o");
                r.se_r = real("se_r");
                r.se_eds = real("se_eds");
                r.nu = real("nu");
                r.df_o = real("df_o");
                r.df_r = real("df_r");
                r.df_eds = real("df_eds");
                r.rel_o = RelevanceTriple{real("rls_o"), real("rle_o"), real("rlp_o"), 0.0};
                r.rel_r = RelevanceTriple{real("rls_r"), real("rle_r"), real("rlp_r"), 0.0};
                r.legacy.sigag = flag("sigag");
                r.legacy.osc15_coverage = flag("osc15_coverage");
                r.legacy.mutual_coverage = flag("mutual_coverage");
                r.legacy.interval_overlap = flag("interval_overlap");
                r.legacy.consistency_p = real("consistency_p");
                r.bsv_point = real("bsv_point");
                r.anh_footnote = flag("anh_footnote");
                std::stringstream labels(text("bonnet"));
                std::string label;
                while (std::getline(labels, label, ';')) {
                    for (BonnetLabel b :
                         {BonnetLabel::repl_d, BonnetLabel::repl_es_S, BonnetLabel::non_d,
                          BonnetLabel::non_es_S, BonnetLabel::non_es_W, BonnetLabel::non_d_Null,
                          BonnetLabel::inc_d, BonnetLabel::inc_es_S, BonnetLabel::inc_es_W}) {
                        if (to_string(b) == label) r.bonnet.push_back(b);
                    }
                }
            }
        }
        rows.push_back(std::move(r));
    }
    return rows;
}

std::string sim_report_to_json(const SimReport& report) {
    auto frequency = [](const Frequency& f) {
        return ordered_json{{"count", f.count}, {"total", f.total}, {"rate", f.rate()},
                            {"mc_se", f.mc_se()}};
    };
    const SimConfig& c = report.config;
    ordered_json j;
    j["config"] = ordered_json{{"n_o", c.n_o},
                               {"n_r", c.n_r},
                               {"true_eff", c.true_eff},
                               {"bsv", c.bsv},
                               {"n_sims", c.n_sims},
                               {"seed", c.seed},
                               {"alpha", c.alpha},
                               {"selection", c.selection},
                               {"original_at_truth", c.original_at_truth},
                               {"model", std::string(to_string(c.model))},
                               {"zeta", c.zeta},
                               {"rho_d", c.rho_d},
                               {"df_policy", std::string(to_string(c.df_policy))}};
    j["iterations"] = report.iterations;
    j["kept"] = report.kept;
    ordered_json outcomes;
    for (ReplicationOutcome o : kAllOutcomes) {
        outcomes[std::string(to_string(o))] = frequency(report.outcome(o));
    }
    j["outcomes"] = outcomes;
    j["outcome_undefined"] = report.outcome_undefined;
    j["legacy"] = ordered_json{{"sigag", frequency(report.sigag)},
                               {"osc15_coverage", frequency(report.osc15_coverage)},
                               {"mutual_coverage", frequency(report.mutual_coverage)},
                               {"interval_overlap", frequency(report.interval_overlap)},
                               {"consistency_reject", frequency(report.consistency_reject)}};
    j["coverage"] = frequency(report.coverage);
    j["coverage_widened"] = frequency(report.coverage_widened);
    j["eds_sig_positive"] = frequency(report.eds_sig_positive);
    j["eds_sig_negative"] = frequency(report.eds_sig_negative);
    j["mean_published_eff"] = report.mean_published_eff;
    j["mean_published_eff_se"] = report.mean_published_eff_se;
    j["mean_abs_published_eff"] = report.mean_abs_published_eff;
    return j.dump(2) + "\n";
}

std::string heterogeneity_to_json(const HeterogeneityEstimate& e) {
    ordered_json j{{"k", e.k},
                   {"original_excluded", e.original_excluded},
                   {"theta_hat", e.theta_hat},
                   {"se", e.se},
                   {"ci", ordered_json::array({e.ci.lo, e.ci.hi})},
                   {"tau2", e.tau2},
                   {"bsv", e.bsv},
                   {"q_statistic", e.q_statistic},
                   {"estimator", "DerSimonian-Laird"}};
    return j.dump(2) + "\n";
}

} // namespace relrep::io

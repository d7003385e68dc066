// relrep: relevance-based classification of studies and replications.
//
//   relrep classify  --t 4.45 --n 8
//   relrep replicate data.csv --df-policy replication-compat --out report.csv --chart fig.svg
//   relrep pool replications.csv
//   relrep simulate sim.cfg --seed 7
//   relrep chart report.csv --out fig.svg
//
// Exit codes: 0 success, 1 validation error, 2 io error.

#include "relrep/errors.hpp"
#include "relrep/heterogeneity.hpp"
#include "relrep/io/chart.hpp"
#include "relrep/io/config.hpp"
#include "relrep/io/csv.hpp"
#include "relrep/io/report.hpp"
#include "relrep/relevance.hpp"
#include "relrep/simulate.hpp"
#include "relrep/stat_kernel.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace {

using namespace relrep;

constexpr int kExitValidation = 1;
constexpr int kExitIo = 2;

struct CommonFlags {
    std::string config_path;
    std::optional<double> zeta;
    std::optional<double> rho_d;
    std::optional<double> level;
    std::optional<std::string> df_policy;
    bool no_sign_align = false;
    std::string out;
};

void add_common(CLI::App& cmd, CommonFlags& f) {
    cmd.add_option("--config", f.config_path, "key=value configuration file");
    cmd.add_option("--zeta", f.zeta, "relevance threshold for effects");
    cmd.add_option("--rho-d", f.rho_d, "relevance threshold for the effect difference");
    cmd.add_option("--level", f.level, "confidence level");
    cmd.add_option("--df-policy", f.df_policy, "own | replication-compat");
    cmd.add_flag("--no-sign-align", f.no_sign_align, "keep negative original directions");
    cmd.add_option("--out", f.out, "output file (default: stdout)");
}

// Flags > config file > defaults.
io::RunConfig resolve(const CommonFlags& f) {
    io::RunConfig cfg;
    if (!f.config_path.empty()) cfg = io::apply_run_config(cfg, io::load_key_values(f.config_path));
    if (f.zeta) cfg.zeta = *f.zeta;
    if (f.rho_d) cfg.rho_d = *f.rho_d;
    if (f.level) cfg.level = *f.level;
    if (f.df_policy) cfg.df_policy = parse_df_policy(*f.df_policy);
    if (f.no_sign_align) cfg.sign_align = false;
    io::validate(cfg);
    return cfg;
}

void write_output(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open output file " + path);
    out << text;
    if (!out) throw IoError("failed writing " + path);
}

std::ifstream open_input(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open input file " + path);
    return in;
}

int run_classify(const CommonFlags& f, std::optional<double> t, std::optional<int> n,
                 const std::string& kind, std::optional<double> eff, std::optional<double> halfwidth,
                 std::optional<double> se, std::optional<double> df, const std::string& format) {
    const io::RunConfig cfg = resolve(f);
    double estimate = 0.0;
    double width = 0.0;
    if (t && n) {
        const StudySummary s = study_from_t(*t, *n, parse_test_kind(kind));
        estimate = s.eff;
        width = two_sided_quantile(cfg.level, s.df) * s.se;
    } else if (eff && halfwidth) {
        estimate = *eff;
        width = *halfwidth;
    } else if (eff && se && df) {
        estimate = *eff;
        width = two_sided_quantile(cfg.level, *df) * *se;
    } else {
        throw UsageError("classify needs --t and --n, --eff and --halfwidth, or --eff, --se and --df");
    }
    const RelevanceTriple triple = relevance_triple(estimate, width, cfg.zeta);
    const EffectClass cls = classify_effect(triple);

    std::string text;
    if (format == "json") {
        nlohmann::ordered_json j{{"eff", estimate},       {"halfwidth", width},
                                 {"zeta", cfg.zeta},      {"rls", triple.rls},
                                 {"rle", triple.rle},     {"rlp", triple.rlp},
                                 {"class", std::string(to_string(cls.label))},
                                 {"row_class", std::string(to_string(cls.row()))}};
        text = j.dump(2) + "\n";
    } else {
        text = "eff=" + std::to_string(estimate) + " halfwidth=" + std::to_string(width)
               + " Rls=" + std::to_string(triple.rls) + " Rle=" + std::to_string(triple.rle)
               + " Rlp=" + std::to_string(triple.rlp) + " class=" + std::string(to_string(cls.label))
               + "\n";
    }
    write_output(f.out, text);
    return 0;
}

int run_replicate(const CommonFlags& f, const std::string& input, const std::string& format,
                  const std::string& chart_path) {
    const io::RunConfig cfg = resolve(f);
    const io::ReportFormat fmt = io::parse_report_format(format);
    std::ifstream in = open_input(input);
    const std::vector<io::StudyRecord> records = io::ingest_csv(in, cfg.sign_align);
    const std::vector<io::ReportRow> rows = io::analyze(records, cfg);
    for (const io::ReportRow& r : rows) {
        if (!r.error.empty()) std::cerr << "warning: " << r.study_id << ": " << r.error << "\n";
    }
    write_output(f.out, io::emit_report(rows, fmt));
    if (!chart_path.empty()) write_output(chart_path, io::emit_chart(rows, cfg));
    return 0;
}

int run_pool(const CommonFlags& f, const std::string& input, bool include_original) {
    const io::RunConfig cfg = resolve(f);
    std::ifstream in = open_input(input);
    const std::vector<io::PoolRecord> records = io::ingest_pool_csv(in, cfg.sign_align);
    std::vector<StudySummary> studies;
    studies.reserve(records.size());
    for (const io::PoolRecord& r : records) studies.push_back(study_from_t(r.t, r.n, r.test_type));
    const bool has_original = !records.empty() && records.front().original;
    const HeterogeneityEstimate est =
        pool_effects(studies, include_original || !has_original, cfg.level);
    write_output(f.out, io::heterogeneity_to_json(est));
    return 0;
}

int run_simulate(const std::string& config_path, std::optional<std::uint64_t> seed,
                 std::optional<unsigned> threads, const std::string& out) {
    SimConfig cfg = io::apply_sim_config(SimConfig{}, io::load_key_values(config_path));
    if (seed) cfg.seed = *seed;
    if (threads) cfg.threads = *threads;
    write_output(out, io::sim_report_to_json(run_simulation(cfg)));
    return 0;
}

int run_chart(const CommonFlags& f, const std::string& report_path) {
    const io::RunConfig cfg = resolve(f);
    std::ifstream in = open_input(report_path);
    const std::vector<io::ReportRow> rows = io::parse_report_csv(in);
    write_output(f.out, io::emit_chart(rows, cfg));
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Relevance-based inference and replication assessment"};
    app.require_subcommand(1);

    CommonFlags classify_flags;
    std::optional<double> t;
    std::optional<int> n;
    std::string kind = "single";
    std::optional<double> eff;
    std::optional<double> halfwidth;
    std::optional<double> se;
    std::optional<double> df;
    std::string classify_format = "text";
    auto* classify = app.add_subcommand("classify", "relevance class of a single study");
    add_common(*classify, classify_flags);
    classify->add_option("--t", t, "t statistic");
    classify->add_option("--n", n, "sample size");
    classify->add_option("--kind", kind, "single | paired");
    classify->add_option("--eff", eff, "effect estimate");
    classify->add_option("--halfwidth", halfwidth, "confidence interval half-width");
    classify->add_option("--se", se, "standard error of the effect");
    classify->add_option("--df", df, "degrees of freedom");
    classify->add_option("--format", classify_format, "text | json");

    CommonFlags replicate_flags;
    std::string replicate_input;
    std::string replicate_format = "csv";
    std::string chart_path;
    auto* replicate = app.add_subcommand("replicate", "original/replication pairs -> report");
    add_common(*replicate, replicate_flags);
    replicate->add_option("input", replicate_input, "CSV: Study,to,no,tr,nr,testType[,dropout]")
        ->required();
    replicate->add_option("--format", replicate_format, "csv | json");
    replicate->add_option("--chart", chart_path, "also write an SVG chart");

    CommonFlags pool_flags;
    std::string pool_input;
    bool include_original = false;
    auto* pool = app.add_subcommand("pool", "random-effects pooling of several replications");
    add_common(*pool, pool_flags);
    pool->add_option("input", pool_input, "CSV: Study,t,n,testType[,role]")->required();
    pool->add_flag("--include-original", include_original, "pool the original study as well");

    std::string sim_config;
    std::optional<std::uint64_t> seed;
    std::optional<unsigned> threads;
    std::string sim_out;
    auto* simulate = app.add_subcommand("simulate", "Monte Carlo experiment from a config file");
    simulate->add_option("config", sim_config, "key=value simulation config")->required();
    simulate->add_option("--seed", seed, "override the configured seed");
    simulate->add_option("--threads", threads, "worker threads");
    simulate->add_option("--out", sim_out, "output file (default: stdout)");

    CommonFlags chart_flags;
    std::string report_path;
    auto* chart = app.add_subcommand("chart", "report CSV -> SVG interval chart");
    add_common(*chart, chart_flags);
    chart->add_option("report", report_path, "CSV report written by replicate")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitValidation;
    }

    try {
        if (*classify) {
            return run_classify(classify_flags, t, n, kind, eff, halfwidth, se, df, classify_format);
        }
        if (*replicate) return run_replicate(replicate_flags, replicate_input, replicate_format, chart_path);
        if (*pool) return run_pool(pool_flags, pool_input, include_original);
        if (*simulate) return run_simulate(sim_config, seed, threads, sim_out);
        if (*chart) return run_chart(chart_flags, report_path);
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitValidation;
    }
    return kExitValidation;
}

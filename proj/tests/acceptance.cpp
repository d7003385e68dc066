// Acceptance suite: one PASS/FAIL line per criterion at the pinned tolerances.
// Exit status is nonzero if any criterion fails.

#include "oracles.hpp"
#include "relrep/heterogeneity.hpp"
#include "relrep/io/config.hpp"
#include "relrep/io/csv.hpp"
#include "relrep/io/report.hpp"
#include "relrep/relevance.hpp"
#include "relrep/replication.hpp"
#include "relrep/simulate.hpp"
#include "relrep/stat_kernel.hpp"

#include <fmt/format.h>

#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <string>
#include <thread>
#include <vector>

using namespace relrep;

namespace {

const std::string kData = RELREP_TEST_DATA;

struct Verdict {
    bool pass = true;
    std::string detail;
};

unsigned worker_threads() { return std::max(1u, std::min(8u, std::thread::hardware_concurrency())); }

// 1. Golden table.
Verdict golden_table() {
    io::RunConfig cfg;
    cfg.df_policy = DfPolicy::replication_compat;
    const auto rows = io::analyze(io::ingest_csv_file(kData + "/osc15_input.csv"), cfg);

    std::ifstream in(kData + "/osc15_supplement.csv");
    const auto table = io::read_csv(in);
    const io::CsvHeader header(table.front());

    Verdict v;
    double worst = 0.0;
    int class_mismatches = 0;
    if (rows.size() + 1 != table.size()) return {false, "row count differs"};
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const io::CsvLine& ref = table[i + 1];
        const io::ReportRow& r = rows[i];
        if (!r.error.empty()) {
            v.pass = false;
            v.detail += r.study_id + ": " + r.error + "; ";
            continue;
        }
        const std::pair<const char*, double> numeric[] = {
            {"eso", r.eso},   {"esr", r.esr},   {"eds", r.eds},     {"ciwo", r.ciwo},
            {"ciwr", r.ciwr}, {"ciwd", r.ciwd}, {"cidwo", r.cidwo}, {"cidwr", r.cidwr}};
        for (const auto& [name, value] : numeric) {
            const double expected = io::parse_cell_real(ref, header.require(name), name);
            const double diff = std::fabs(value - expected);
            worst = std::max(worst, diff);
            if (diff > 6e-4) {
                v.pass = false;
                v.detail += fmt::format("{} {} off by {:.2e}; ", r.study_id, name, diff);
            }
        }
        const std::pair<const char*, std::string> classes[] = {
            {"classo", std::string(to_string(r.classo.row()))},
            {"classr", std::string(to_string(r.classr.row()))},
            {"classeds", std::string(to_string(r.classeds.label))},
            {"replclass", r.replclass ? std::string(to_string(*r.replclass)) : "-"}};
        for (const auto& [name, value] : classes) {
            const std::string& expected = ref.fields[header.require(name)];
            if (value != expected) {
                ++class_mismatches;
                v.pass = false;
                v.detail += fmt::format("{} {} = {} (expected {}); ", r.study_id, name, value, expected);
            }
        }
    }
    v.detail = fmt::format("max |diff| {:.2e}, class mismatches {}. ", worst, class_mismatches) + v.detail;
    return v;
}

// 2. Overlap probability.
Verdict overlap() {
    const double analytic = overlap_probability(0.95);
    SimConfig cfg = io::apply_sim_config(SimConfig{}, io::load_key_values(kData + "/sim_overlap.cfg"));
    cfg.threads = worker_threads();
    const SimReport report = run_simulation(cfg);
    const double mc = report.interval_overlap.rate();
    const bool ok_analytic = std::fabs(analytic - 0.99723) <= 5e-4;
    const bool ok_mc = std::fabs(mc - analytic) <= 0.003;
    return {ok_analytic && ok_mc,
            fmt::format("analytic {:.5f}, Monte Carlo {:.5f} +- {:.5f} (n={}), two-sided "
                        "2*Phi-1 = {:.5f}",
                        analytic, mc, report.interval_overlap.mc_se(), report.kept,
                        2.0 * analytic - 1.0)};
}

// 3. Significance agreement for a just-significant original.
Verdict sigag_borderline() {
    SimConfig cfg;
    cfg.n_o = 30;
    cfg.n_r = 30;
    cfg.model = SimModel::normal;
    cfg.original_at_truth = true;
    cfg.true_eff = borderline_effect(cfg.n_o, 0.05, SimModel::normal);
    cfg.n_sims = 100000;
    cfg.seed = 20240602;
    cfg.threads = worker_threads();
    const SimReport report = run_simulation(cfg);
    const double rate = report.sigag.rate();

    // Reported only: the exact-t version re-estimates the scale in both studies.
    SimConfig exact = cfg;
    exact.model = SimModel::exact;
    exact.true_eff = borderline_effect(exact.n_o, 0.05, SimModel::exact);
    const SimReport exact_report = run_simulation(exact);

    return {std::fabs(rate - 0.5) <= 0.01,
            fmt::format("normal model sigag {:.4f} +- {:.4f} (true_eff {:.6f}, n={}); exact-t model "
                        "{:.4f} +- {:.4f} (not gated)",
                        rate, report.sigag.mc_se(), cfg.true_eff, report.kept,
                        exact_report.sigag.rate(), exact_report.sigag.mc_se())};
}

// 4. t quantiles against bisection on the integrated density.
Verdict kernels() {
    double worst = 0.0;
    Verdict v;
    for (double df : {1.0, 2.0, 5.0, 7.0, 14.0, 30.0, 100.0, 1000.0}) {
        for (double p : {0.5, 0.9, 0.975, 0.995}) {
            const double diff = std::fabs(t_quantile(p, df) - oracle::t_quantile(p, df));
            worst = std::max(worst, diff);
            if (diff > 1e-6) {
                v.pass = false;
                v.detail += fmt::format("df={} p={} off by {:.2e}; ", df, p, diff);
            }
        }
    }
    v.detail = fmt::format("32 grid points, max |diff| {:.2e}. ", worst) + v.detail;
    return v;
}

// 5. Tick gap > 0 exactly when the eds interval excludes zero.
Verdict gap_identity() {
    std::mt19937_64 gen(5150);
    std::uniform_real_distribution<double> effs(-1.5, 1.5);
    std::uniform_real_distribution<double> ses(0.01, 0.6);
    std::uniform_real_distribution<double> levels(0.5, 0.999);
    std::uniform_int_distribution<int> dfs(1, 300);
    int violations = 0;
    int near_ties = 0;
    for (int i = 0; i < 10000; ++i) {
        const StudySummary o{effs(gen), ses(gen), static_cast<double>(dfs(gen)), 10, TestKind::paired};
        const StudySummary r{effs(gen), ses(gen), static_cast<double>(dfs(gen)), 10, TestKind::paired};
        const double level = levels(gen);
        const DfPolicy policy = i % 2 ? DfPolicy::own : DfPolicy::replication_compat;
        const EdsSummary e = eds_summary(o, r, level, policy);
        const double gap = tick_gap(o, r, e);
        const double scale = std::max(std::fabs(e.eds), e.halfwidth);
        if (std::fabs(gap - (std::fabs(e.eds) - e.halfwidth)) > 1e-12 * scale) ++violations;
        if (std::fabs(gap) <= 1e-12 * scale) {
            ++near_ties;
            continue;
        }
        const bool significant = e.interval().lo > 0.0 || e.interval().hi < 0.0;
        if ((gap > 0.0) != significant) ++violations;
    }
    return {violations == 0, fmt::format("10000 tuples, {} violations, {} ties within tolerance",
                                         violations, near_ties)};
}

// 6. Classification: partition, scale invariance, monotone sweep.
Verdict classification() {
    std::mt19937_64 gen(6060);
    std::uniform_real_distribution<double> effs(-1.0, 1.5);
    std::uniform_real_distribution<double> hws(0.0, 0.8);
    std::uniform_real_distribution<double> zetas(0.01, 0.5);
    std::uniform_real_distribution<double> scales(1e-3, 1e3);
    int partition = 0;
    int scale = 0;
    int sweep = 0;
    for (int i = 0; i < 100000; ++i) {
        const double eff = effs(gen);
        const double hw = hws(gen);
        const double zeta = zetas(gen);
        const double lo = eff - hw;
        const double hi = eff + hw;
        const EffectClass c = classify_effect(relevance_triple(eff, hw, zeta));

        const bool rlv = lo >= zeta;
        const bool ctr = hi < 0.0;
        const bool ngl = !rlv && hi >= 0.0 && hi < zeta;
        const bool amb = !rlv && hi >= zeta;
        if (int(rlv) + int(ctr) + int(ngl) + int(amb) != 1) ++partition;
        const EffectLabel expected = rlv   ? EffectLabel::Rlv
                                     : ctr ? EffectLabel::Ctr
                                     : ngl ? (lo > 0.0 ? EffectLabel::NglSig : EffectLabel::Ngl)
                                           : (lo > 0.0 ? EffectLabel::AmbSig : EffectLabel::Amb);
        if (c.label != expected) ++partition;

        // Exact for powers of two; for a general factor only exact ties may move.
        const double k = scales(gen);
        const double p2 = std::ldexp(1.0, static_cast<int>(std::lround(std::log2(k))));
        if (classify_effect(relevance_triple(p2 * eff, p2 * hw, p2 * zeta)) != c) ++scale;
        const RelevanceTriple t = relevance_triple(k * eff, k * hw, k * zeta);
        const bool clear = std::fabs(t.rls - 1.0) > 1e-9 && std::fabs(t.rlp) > 1e-9
                           && std::fabs(t.rlp - 1.0) > 1e-9 && std::fabs(t.rls) > 1e-9;
        if (clear && classify_effect(t) != c) ++scale;
    }

    const auto rank = [](EffectLabel l) {
        switch (l) {
        case EffectLabel::Ctr: return 0;
        case EffectLabel::Ngl: return 1;
        case EffectLabel::Amb: return 2;
        default: return 3;
        }
    };
    for (int trial = 0; trial < 400; ++trial) {
        const double hw = hws(gen);
        const double zeta = zetas(gen);
        int last = -1;
        for (int step = 0; step <= 1000; ++step) {
            const double eff = -1.0 + 2.5 * step / 1000.0;
            const int r = rank(classify_effect(relevance_triple(eff, hw, zeta)).base());
            if (r < last) ++sweep;
            last = r;
        }
    }
    return {partition + scale + sweep == 0,
            fmt::format("100000 intervals: partition {}, scale {}, sweep {} violations", partition,
                        scale, sweep)};
}

// 7. Coverage under between-study variability; pooling identical studies.
// Normal idealization (known sampling variance): under the exact t-derived
// model the nominal interval already undercovers away from zero, because
// var(eff_hat) is about (1 + d^2 / 2) / (4 n) rather than 1 / (4 n).
Verdict heterogeneity() {
    SimConfig cfg;
    cfg.model = SimModel::normal;
    cfg.n_o = 50;
    cfg.n_r = 50;
    cfg.true_eff = 0.3;
    cfg.n_sims = 100000;
    cfg.seed = 7070;
    cfg.threads = worker_threads();

    cfg.bsv = 0.0;
    const CoverageResult none = coverage_under_bsv(cfg);
    cfg.bsv = 0.2;
    const CoverageResult some = coverage_under_bsv(cfg);

    const std::vector<StudySummary> same(6, study_from_t(3.0, 40, TestKind::paired));
    const double tau2 = pool_effects(same, true).tau2;

    const bool ok = std::fabs(none.nominal.rate() - 0.95) <= 0.01
                    && some.nominal.rate() + 3.0 * some.nominal.mc_se() < 0.93
                    && std::fabs(some.widened.rate() - 0.95) <= 0.01 && tau2 == 0.0;
    return {ok, fmt::format("bsv 0: {:.4f}; bsv 0.2: {:.4f} +- {:.4f}, widened {:.4f}; identical pool "
                            "tau2 = {}",
                            none.nominal.rate(), some.nominal.rate(), some.nominal.mc_se(),
                            some.widened.rate(), tau2)};
}

// 8. Selection inflates published originals.
Verdict selection() {
    SimConfig cfg;
    cfg.n_o = 20;
    cfg.n_r = 20;
    cfg.true_eff = 0.1;
    cfg.selection = true;
    cfg.n_sims = 100000;
    cfg.seed = 8080;
    cfg.threads = worker_threads();
    const SimReport report = selection_bias_demo(cfg);
    const double excess = report.mean_published_eff - cfg.true_eff;
    return {excess > 3.0 * report.mean_published_eff_se,
            fmt::format("mean published {:.4f} (se {:.4f}, {} of {} kept), excess {:.1f} se",
                        report.mean_published_eff, report.mean_published_eff_se, report.kept,
                        report.iterations, excess / report.mean_published_eff_se)};
}

} // namespace

int main() {
    struct Criterion {
        int id;
        const char* name;
        std::function<Verdict()> run;
        double budget_s;
    };
    const Criterion criteria[] = {
        {1, "golden table reproduction", golden_table, 1.0},
        {2, "interval overlap probability", overlap, 10.0},
        {3, "sigag for a borderline original", sigag_borderline, 10.0},
        {4, "t quantile kernel", kernels, 0.0},
        {5, "tick gap <=> significant difference", gap_identity, 0.0},
        {6, "classification properties", classification, 0.0},
        {7, "heterogeneity coverage and pooling", heterogeneity, 0.0},
        {8, "selection bias", selection, 0.0},
    };

    int failures = 0;
    for (const Criterion& c : criteria) {
        const auto start = std::chrono::steady_clock::now();
        Verdict v;
        try {
            v = c.run();
        } catch (const std::exception& e) {
            v = {false, std::string("exception: ") + e.what()};
        }
        const double seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (c.budget_s > 0.0 && seconds > c.budget_s) {
            v.pass = false;
            v.detail += fmt::format(" [over the {:.0f} s budget]", c.budget_s);
        }
        if (!v.pass) ++failures;
        std::cout << fmt::format("{} [{}] {} ({:.2f} s): {}\n", v.pass ? "PASS" : "FAIL", c.id, c.name,
                                 seconds, v.detail);
    }
    std::cout << fmt::format("{}/{} criteria passed\n", 8 - failures, 8);
    return failures == 0 ? 0 : 1;
}

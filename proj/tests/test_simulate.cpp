#include "relrep/errors.hpp"
#include "relrep/rng.hpp"
#include "relrep/simulate.hpp"

#include <doctest.h>

#include <cmath>

using namespace relrep;

namespace {

SimConfig base_config() {
    SimConfig cfg;
    cfg.n_o = 20;
    cfg.n_r = 30;
    cfg.true_eff = 0.25;
    cfg.n_sims = 6000;
    cfg.seed = 42;
    return cfg;
}

bool same_counts(const SimReport& a, const SimReport& b) {
    for (std::size_t i = 0; i < a.outcomes.size(); ++i) {
        if (a.outcomes[i].count != b.outcomes[i].count) return false;
    }
    return a.iterations == b.iterations && a.kept == b.kept
           && a.outcome_undefined == b.outcome_undefined && a.sigag.count == b.sigag.count
           && a.interval_overlap.count == b.interval_overlap.count
           && a.coverage.count == b.coverage.count
           && a.consistency_reject.count == b.consistency_reject.count
           && a.mean_published_eff == b.mean_published_eff;
}

} // namespace

TEST_CASE("counter generator: pinned stream") {
    // SplitMix64 from state 0.
    CounterRng rng(0);
    CHECK(rng.next_u64() == 0xE220A8397B1DCDAFULL);
    CHECK(rng.next_u64() == 0x6E789E6AA1B965F4ULL);
    CHECK(rng.next_u64() == 0x06C45D188009454FULL);
    CHECK(rng.counter() == 3);

    // Random access: restarting at a counter reproduces the tail of the stream.
    CounterRng a(derive_key(7, 3));
    for (int i = 0; i < 10; ++i) a.next_u64();
    const std::uint64_t eleventh = a.next_u64();
    CounterRng b(derive_key(7, 3), 10);
    CHECK(b.next_u64() == eleventh);
    CHECK(derive_key(7, 3) != derive_key(7, 4));
    CHECK(derive_key(7, 3) != derive_key(8, 3));
}

TEST_CASE("counter generator: uniform and normal moments") {
    CounterRng rng(derive_key(1, 1));
    double su = 0, sz = 0, sz2 = 0;
    const int n = 200000;
    for (int i = 0; i < n; ++i) {
        const double u = rng.next_uniform();
        REQUIRE(u > 0.0);
        REQUIRE(u < 1.0);
        su += u;
        const double z = rng.next_normal();
        sz += z;
        sz2 += z * z;
    }
    CHECK(std::fabs(su / n - 0.5) < 3.0 * std::sqrt(1.0 / 12.0 / n));
    CHECK(std::fabs(sz / n) < 3.0 / std::sqrt(n));
    CHECK(std::fabs(sz2 / n - 1.0) < 3.0 * std::sqrt(2.0 / n));
}

TEST_CASE("simulation is reproducible and independent of the thread count") {
    SimConfig cfg = base_config();
    const SimReport one = run_simulation(cfg);
    CHECK(same_counts(one, run_simulation(cfg)));
    cfg.threads = 4;
    CHECK(same_counts(one, run_simulation(cfg)));
    cfg.threads = 3;
    cfg.seed = 43;
    CHECK_FALSE(same_counts(one, run_simulation(cfg)));
}

TEST_CASE("iteration ranges merge to the full run") {
    const SimConfig cfg = base_config();
    SimTally left = simulate_range(cfg, 0, 2500);
    left.merge(simulate_range(cfg, 2500, 3500));
    const SimTally whole = simulate_range(cfg, 0, 6000);
    CHECK(left.iterations == whole.iterations);
    CHECK(left.outcomes == whole.outcomes);
    CHECK(left.sigag == whole.sigag);
    CHECK(left.sum_published == doctest::Approx(whole.sum_published).epsilon(1e-12));
}

TEST_CASE("outcome frequencies form a distribution over realized outcomes") {
    const SimReport r = run_simulation(base_config());
    std::uint64_t realized = 0;
    double total_rate = 0.0;
    for (const Frequency& f : r.outcomes) {
        realized += f.count;
        total_rate += f.rate();
    }
    CHECK(realized + r.outcome_undefined == r.kept);
    CHECK(total_rate == doctest::Approx(1.0));
    CHECK(r.outcome(ReplicationOutcome::Drp).count == 0);
    CHECK(r.kept == r.iterations);
}

TEST_CASE("selection inflates published effects") {
    SimConfig cfg = base_config();
    cfg.true_eff = 0.1;
    cfg.selection = true;
    cfg.n_sims = 20000;
    const SimReport r = selection_bias_demo(cfg);
    CHECK(r.kept < r.iterations);
    CHECK(r.mean_published_eff - cfg.true_eff > 3.0 * r.mean_published_eff_se);

    cfg.selection = false;
    CHECK_THROWS_AS(selection_bias_demo(cfg), ConfigError);
    const SimReport unselected = run_simulation(cfg);
    // Without selection the mean is the noncentral-t mean, theta * c(df) with
    // c(df) = sqrt(df/2) Gamma((df-1)/2) / Gamma(df/2), slightly above theta.
    const double df = cfg.n_o - 1.0;
    const double c = std::sqrt(df / 2.0) * std::exp(std::lgamma((df - 1.0) / 2.0) - std::lgamma(df / 2.0));
    CHECK(std::fabs(unselected.mean_published_eff - cfg.true_eff * c)
          < 3.0 * unselected.mean_published_eff_se);
}

TEST_CASE("consistency test holds its level when effects agree") {
    SimConfig cfg = base_config();
    cfg.model = SimModel::normal;
    cfg.n_sims = 40000;
    const SimReport r = run_simulation(cfg);
    CHECK(std::fabs(r.consistency_reject.rate() - 0.05) < 3.0 * r.consistency_reject.mc_se());
}

TEST_CASE("null effect: significant differences are symmetric") {
    SimConfig cfg = base_config();
    cfg.true_eff = 0.0;
    cfg.n_r = 20;
    cfg.n_sims = 40000;
    const SimReport r = run_simulation(cfg);
    const double pos = r.eds_sig_positive.rate();
    const double neg = r.eds_sig_negative.rate();
    const double se = std::sqrt((pos + neg) / static_cast<double>(r.kept));
    CHECK(std::fabs(pos - neg) < 3.0 * se);
    CHECK(std::fabs(r.mean_published_eff) < 3.0 * r.mean_published_eff_se);
}

TEST_CASE("nominal coverage without between-study variability") {
    SimConfig cfg = base_config();
    cfg.true_eff = 0.1;
    cfg.n_sims = 20000;
    const CoverageResult c = coverage_under_bsv(cfg);
    CHECK(std::fabs(c.nominal.rate() - 0.95) < 3.0 * std::sqrt(0.95 * 0.05 / 20000));
    CHECK(c.widened.count == c.nominal.count);
}

TEST_CASE("borderline effect is just significant") {
    const double e = borderline_effect(30, 0.05, SimModel::normal);
    CHECK(e == doctest::Approx(1.959963984540054 / (2.0 * std::sqrt(30.0))).epsilon(1e-8));
    const StudySummary s{e, 1.0 / (2.0 * std::sqrt(30.0)), INFINITY, 30, TestKind::paired};
    CHECK(t_two_sided_p(s.eff / s.se, s.df) < 0.05);
    const double ex = borderline_effect(30, 0.05, SimModel::exact);
    CHECK(t_two_sided_p(2.0 * std::sqrt(30.0) * ex, 29) < 0.05);
    CHECK(ex > e);
    CHECK_THROWS_AS(borderline_effect(1, 0.05, SimModel::exact), DomainError);
}

TEST_CASE("simulation config validation") {
    SimConfig cfg = base_config();
    cfg.n_o = 1;
    CHECK_THROWS_AS(run_simulation(cfg), ConfigError);
    cfg = base_config();
    cfg.n_sims = 0;
    CHECK_THROWS_AS(run_simulation(cfg), ConfigError);
    cfg = base_config();
    cfg.alpha = 1.0;
    CHECK_THROWS_AS(run_simulation(cfg), ConfigError);
    cfg = base_config();
    cfg.bsv = -0.1;
    CHECK_THROWS_AS(run_simulation(cfg), ConfigError);
    cfg = base_config();
    cfg.threads = 0;
    CHECK_THROWS_AS(run_simulation(cfg), ConfigError);
    CHECK(parse_sim_model("normal") == SimModel::normal);
    CHECK_THROWS_AS(parse_sim_model("bootstrap"), ConfigError);
}

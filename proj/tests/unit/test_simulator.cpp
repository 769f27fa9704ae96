#include <cmath>

#include "doctest.h"
#include "driftdet/closed_form.hpp"
#include "driftdet/io.hpp"
#include "driftdet/simulator.hpp"
#include "fixtures.hpp"

using namespace driftdet;

TEST_CASE("sim config validation and cap") {
    SimConfig s;
    CHECK_NOTHROW(s.validate());
    CHECK(s.resolved_t_cap({2.0, 1.0}) == doctest::Approx(12.5));
    s.dt = 0.0;
    CHECK_THROWS(s.validate());
    s = {};
    s.n_paths = 0;
    CHECK_THROWS(s.validate());
}

TEST_CASE("one coordinate Monte Carlo matches the closed form") {
    const ModelParams m{1.0, 2.0};
    const OneDSolution s = solve_oned(m);
    SimConfig cfg;
    cfg.n_paths = 20000;
    cfg.dt = 1e-3;
    cfg.seed = 99;
    const RiskReport r = simulate_oned_p0(1.0, m, s.alpha, s.beta, true, cfg);
    CHECK(r.n_paths == cfg.n_paths);
    // The discretely monitored exit overshoots slightly; allow a small bias on top of 4 SE.
    CHECK(std::abs(r.mean_loss - oned_value(1.0, s, m)) < 4.0 * r.std_err + 1e-2);
}

TEST_CASE("martingale check under P0") {
    const ModelParams m{1.0, 2.0};
    SimConfig cfg;
    cfg.n_paths = 50000;
    const MartingaleCheck mc = martingale_check({0.5, 2.0}, 1.0, m, cfg);
    CHECK(std::abs(mc.mean[0] - 0.5) < 4.0 * mc.std_err[0]);
    CHECK(std::abs(mc.mean[1] - 2.0) < 4.0 * mc.std_err[1]);
}

TEST_CASE("prior concentrated on H0 stops at once with no loss") {
    const Boundaries& b = fixture::coarse_boundaries();
    SimConfig cfg;
    cfg.n_paths = 100;
    const RiskReport r = simulate_risk_ppi({1.0, 0.0, 0.0}, b.params, b, cfg);
    CHECK(r.mean_loss == 0.0);
    CHECK(r.mean_tau == 0.0);
    CHECK(r.count_by_hypothesis[0] == 100);
}

TEST_CASE("simulation is reproducible across seeds, threads and execution modes") {
    const Boundaries& b = fixture::coarse_boundaries();
    SimConfig cfg;
    cfg.n_paths = 2000;
    cfg.seed = 5;
    cfg.trace_paths = 3;
    const Prior pr{0.34, 0.33, 0.33};
    const std::string ref = dump(to_json(simulate_risk_ppi(pr, b.params, b, cfg)));
    for (const int threads : {1, 2, 5}) {
        cfg.threads = threads;
        CHECK(dump(to_json(simulate_risk_ppi(pr, b.params, b, cfg))) == ref);
    }
    cfg.execution = Execution::Serial;
    CHECK(dump(to_json(simulate_risk_ppi(pr, b.params, b, cfg))) == ref);
    cfg.seed = 6;
    CHECK(dump(to_json(simulate_risk_ppi(pr, b.params, b, cfg))) != ref);
}

TEST_CASE("risk report fields are consistent") {
    const Boundaries& b = fixture::coarse_boundaries();
    SimConfig cfg;
    cfg.n_paths = 4000;
    cfg.trace_paths = 2;
    const RiskReport r = simulate_risk_ppi({0.34, 0.33, 0.33}, b.params, b, cfg);
    CHECK(r.count_by_hypothesis[0] + r.count_by_hypothesis[1] + r.count_by_hypothesis[2] == r.n_paths);
    CHECK(r.mean_tau > 0.0);
    CHECK(r.mean_loss > r.mean_tau);
    CHECK(r.capped_fraction == 0.0);
    CHECK(!r.cap_warning);
    for (const double e : r.error_rate_by_hypothesis) CHECK((e >= 0.0 && e <= 1.0));
    REQUIRE(!r.trace.empty());
    CHECK(r.trace.front().t == 0.0);
    CHECK(r.trace.back().path == 1);

    // Under P0 the same rule gives an estimate of value_hat.
    SimConfig p0 = cfg;
    p0.measure = Measure::P_ZERO;
    const RiskReport q = simulate_value_p0({1.0, 1.0}, b.params, b, p0);
    CHECK(q.measure == Measure::P_ZERO);
    CHECK(q.mean_loss > 0.0);
    CHECK(q.mean_loss < loss_hat({1.0, 1.0}, b.params));
}

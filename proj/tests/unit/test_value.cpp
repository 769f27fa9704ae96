#include <cmath>
#include <cstring>

#include "doctest.h"
#include "driftdet/errors.hpp"
#include "driftdet/value.hpp"
#include "fixtures.hpp"

using namespace driftdet;

TEST_CASE("value equals the terminal loss on the stopping set") {
    const Boundaries& b = fixture::coarse_boundaries();
    const SolverConfig c = fixture::coarse_config();
    for (const PhiPoint p : {PhiPoint{0.0, 0.0}, PhiPoint{0.1, 0.2}, PhiPoint{8.0, 0.5}, PhiPoint{0.5, 8.0}}) {
        REQUIRE(classify(p, b) != Region::CONTINUE);
        const ValueReport r = value_report(p, b, c);
        CHECK(r.v_hat == loss_hat(p, b.params));
        CHECK(r.m_hat == r.v_hat);
        CHECK(r.in_region == classify(p, b));
    }
}

TEST_CASE("value never exceeds stopping now and is symmetric") {
    const Boundaries& b = fixture::coarse_boundaries();
    const SolverConfig c = fixture::coarse_config();
    for (const PhiPoint p : {PhiPoint{1.0, 1.0}, PhiPoint{0.7, 1.3}, PhiPoint{1.5, 0.8}}) {
        REQUIRE(classify(p, b) == Region::CONTINUE);
        const ValueReport r = value_report(p, b, c);
        CHECK(r.v_hat <= r.m_hat);
        CHECK(r.v_hat > 0.0);
        CHECK(r.v_hat == std::min(r.integral, r.m_hat));
        CHECK(value_hat(p.swapped(), b, c) == doctest::Approx(r.v_hat).epsilon(1e-10));
    }
}

TEST_CASE("batch evaluation: serial and parallel agree bit for bit") {
    const Boundaries& b = fixture::coarse_boundaries();
    SolverConfig c = fixture::coarse_config();
    std::vector<PhiPoint> pts;
    for (int i = 0; i < 6; ++i) pts.push_back({0.3 * i, 0.2 + 0.25 * i});
    c.execution = Execution::Serial;
    const auto s = value_batch(pts, b, c);
    c.execution = Execution::Parallel;
    c.threads = 3;
    const auto p = value_batch(pts, b, c);
    REQUIRE(s.size() == pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i) {
        CHECK(std::memcmp(&s[i].v_hat, &p[i].v_hat, sizeof(double)) == 0);
        CHECK(s[i].phi == pts[i]);
    }
}

TEST_CASE("original-problem value and input checks") {
    const Boundaries& b = fixture::coarse_boundaries();
    const SolverConfig c = fixture::coarse_config();
    const Prior pr{0.4, 0.35, 0.25};
    const double v = value_original(pr, b.params, b, c);
    CHECK(v == doctest::Approx(pr.pi0 * value_hat(prior_to_phi(pr), b, c)));
    CHECK(value_original({1.0, 0.0, 0.0}, b.params, b, c) == 0.0);
    CHECK_THROWS_AS(value_original(pr, {1.0, 3.0}, b, c), BoundaryMismatch);
    CHECK_THROWS_AS(value_hat({-1.0, 0.5}, b, c), DomainError);
    CHECK_THROWS_AS(value_hat({NAN, 0.5}, b, c), DomainError);
    CHECK_THROWS_AS(value_original({0.0, 0.5, 0.5}, b.params, b, c), DegeneratePrior);
}

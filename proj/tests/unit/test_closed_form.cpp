#include <cmath>

#include "doctest.h"
#include "driftdet/closed_form.hpp"
#include "driftdet/errors.hpp"

using namespace driftdet;

TEST_CASE("beta matches frozen roots") {
    // Independent high-precision roots of b - 1/b + 2 log b = c mu^2.
    CHECK(solve_beta({1.0, 0.1}) == doctest::Approx(1.0253137856464219704).epsilon(1e-13));
    CHECK(solve_beta({1.0, 1.0}) == doctest::Approx(1.2823751404381706818).epsilon(1e-13));
    CHECK(solve_beta({1.0, 2.0}) == doctest::Approx(1.6324354951789212041).epsilon(1e-13));
    CHECK(solve_beta({1.0, 10.0}) == doctest::Approx(6.4326752859773243923).epsilon(1e-13));
    // Only c mu^2 matters, and the sign of mu does not.
    CHECK(solve_beta({2.0, 0.5}) == doctest::Approx(solve_beta({1.0, 2.0})).epsilon(1e-14));
    CHECK(solve_beta({-1.0, 2.0}) == solve_beta({1.0, 2.0}));
}

TEST_CASE("one coordinate value: frozen point and smooth fit") {
    const ModelParams m{1.0, 2.0};
    const OneDSolution s = solve_oned(m);
    CHECK(s.alpha == doctest::Approx(1.0 / s.beta));
    CHECK(oned_value(1.0, s, m) == doctest::Approx(1.7549828726810620433).epsilon(1e-12));
    for (const double edge : {s.alpha, s.beta}) {
        const double h = 1e-6;
        const double lin = m.c * std::min(1.0, edge);
        CHECK(oned_value(edge, s, m) == doctest::Approx(lin).epsilon(1e-10));
        const double in = edge == s.alpha ? edge + h : edge - h;
        const double slope_in = (oned_value(in, s, m) - oned_value(edge, s, m)) / (in - edge);
        const double slope_out = edge == s.alpha ? m.c : 0.0;
        CHECK(slope_in == doctest::Approx(slope_out).epsilon(1e-4).scale(1.0));
    }
    CHECK(oned_value(1.0, s, m) < m.c);
    CHECK_THROWS_AS(oned_value(-0.1, s, m), DomainError);
}

TEST_CASE("auxiliary value: thresholds, frozen point, smooth fit") {
    const ModelParams m{1.0, 2.0};
    const AuxOneDSolution s = aux_solution(m);
    CHECK(s.phi0_tilde == doctest::Approx(2.0 / (std::exp(2.0) - 1.0)));
    CHECK(s.phi1_tilde == doctest::Approx(2.0 / (1.0 - std::exp(-2.0))));
    CHECK(aux_value(1.0, s, m) == doctest::Approx(1.5255253529294730628).epsilon(1e-12));
    for (const double edge : {s.phi0_tilde, s.phi1_tilde}) {
        CHECK(aux_value(edge, s, m) == doctest::Approx(m.c * std::min(1.0, edge)).epsilon(1e-10));
    }
    const double h = 1e-6;
    CHECK((aux_value(s.phi0_tilde + h, s, m) - aux_value(s.phi0_tilde, s, m)) / h ==
          doctest::Approx(m.c).epsilon(1e-4));
    CHECK((aux_value(s.phi1_tilde, s, m) - aux_value(s.phi1_tilde - h, s, m)) / h ==
          doctest::Approx(0.0).epsilon(1e-4).scale(1.0));
}

#include <cmath>
#include <limits>

#include "doctest.h"
#include "driftdet/errors.hpp"
#include "driftdet/model.hpp"
#include "driftdet/transition.hpp"

using namespace driftdet;

TEST_CASE("params validation") {
    const auto check = [](double mu, double c) { ModelParams{mu, c}.validate(); };
    CHECK_NOTHROW(check(1.0, 2.0));
    CHECK_NOTHROW(check(-0.5, 2.0));
    CHECK_THROWS_AS(check(0.0, 2.0), std::invalid_argument);
    CHECK_THROWS_AS(check(1.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(check(1.0, -1.0), std::invalid_argument);
    CHECK_THROWS_AS(check(std::numeric_limits<double>::quiet_NaN(), 1.0), std::invalid_argument);
    CHECK(ModelParams{2.0, 0.5}.cmu2() == doctest::Approx(2.0));
}

TEST_CASE("prior and ratio chart round trip") {
    const Prior p{0.5, 0.3, 0.2};
    const PhiPoint f = prior_to_phi(p);
    CHECK(f.phi1 == doctest::Approx(0.6));
    CHECK(f.phi2 == doctest::Approx(0.4));
    const Posterior q = phi_to_posterior(f);
    CHECK(q.p0 == doctest::Approx(0.5));
    CHECK(q.p1 == doctest::Approx(0.3));
    CHECK(q.p2 == doctest::Approx(0.2));
    CHECK_THROWS_AS((void)prior_to_phi(Prior{0.0, 0.5, 0.5}), DegeneratePrior);
    const auto check = [](double a, double b, double c) { Prior{a, b, c}.validate(); };
    CHECK_THROWS(check(0.5, 0.6, -0.1));
    CHECK_THROWS(check(0.5, 0.6, 0.1));
}

TEST_CASE("terminal loss in both charts") {
    const ModelParams m{1.0, 2.0};
    CHECK(loss_hat({0.2, 0.3}, m) == doctest::Approx(1.0));
    CHECK(loss_hat({3.0, 0.5}, m) == doctest::Approx(3.0));
    CHECK(loss_hat({3.0, 4.0}, m) == doctest::Approx(8.0));
    CHECK(gain_hat({0.25, 0.5}) == doctest::Approx(1.75));
    // pi0 * loss_hat(phi) = loss on the simplex.
    const Prior p{0.2, 0.5, 0.3};
    const Posterior q{p.pi0, p.pi1, p.pi2};
    CHECK(p.pi0 * loss_hat(prior_to_phi(p), m) == doctest::Approx(loss_posterior(q, m)));
}

TEST_CASE("terminal decision picks the largest posterior, lowest index on ties") {
    CHECK(terminal_decision({0.2, 0.5, 0.3}) == 1);
    CHECK(terminal_decision({0.4, 0.4, 0.2}) == 0);
    CHECK(terminal_decision({0.2, 0.4, 0.4}) == 1);
    CHECK(terminal_decision({0.1, 0.2, 0.7}) == 2);
}

TEST_CASE("mayer correction solves the generator equation") {
    const ModelParams m{1.0, 2.0};
    for (const PhiPoint p : {PhiPoint{0.5, 0.5}, PhiPoint{2.0, 0.3}, PhiPoint{1.5, 4.0}}) {
        CHECK(generator_residual(p, m, 1e-3) < 1e-5 * gain_hat(p));
    }
    CHECK_THROWS(mayer_check({0.0, 1.0}, m));
}

#include <cmath>

#include "doctest.h"
#include "driftdet/closed_form.hpp"
#include "driftdet/continuation.hpp"
#include "driftdet/quadrature.hpp"
#include "driftdet/solver.hpp"
#include "fixtures.hpp"

using namespace driftdet;

TEST_CASE("solver config validation") {
    const ModelParams m{1.0, 2.0};
    SolverConfig c;
    CHECK_NOTHROW(c.validate(m));
    c.n1 = 5;
    CHECK_THROWS(c.validate(m));
    c = {};
    c.damping = 0.0;
    CHECK_THROWS(c.validate(m));
    c = {};
    c.stop_fraction = 1.5;
    CHECK_THROWS(c.validate(m));
    c = {};
    c.phi_max = 2.0;
    CHECK_THROWS(c.validate(m));
    c = {};
    c.init_scale = 0.5;
    CHECK_THROWS(c.validate(m));
    CHECK(SolverConfig{}.resolved_phi_max(m) == doctest::Approx(10.0 * solve_beta(m)));
}

TEST_CASE("initial iterate") {
    const ModelParams m{1.0, 2.0};
    const SolverConfig c = fixture::coarse_config();
    const Boundaries b = initial_boundaries(m, c);
    CHECK_NOTHROW(b.validate());
    CHECK(b.grid0.size() == std::size_t(c.n0));
    CHECK(b.grid1.size() == std::size_t(c.n1));
    CHECK(b.b1.front() == doctest::Approx(b.beta));
    CHECK(b.b0.front() == doctest::Approx(1.0 / b.beta));
    CHECK(b.gamma == doctest::Approx(0.5 * (1.0 / b.beta + 1.0)));
    CHECK(b.grid1.back() == doctest::Approx(10.0 * b.beta));
}

TEST_CASE("coarse solve: converged, pinned endpoints, stopping set shape") {
    const Boundaries& b = fixture::coarse_boundaries();
    const double beta = solve_beta({1.0, 2.0});
    CHECK(b.converged);
    CHECK(b.beta == beta);
    // On the axes the problem is one-dimensional.
    CHECK(b.b1.front() == doctest::Approx(beta).epsilon(5e-3));
    CHECK(b.b0.front() == doctest::Approx(1.0 / beta).epsilon(5e-3));
    // gamma lies between the axis threshold and the diagonal point 1.
    CHECK(b.gamma > b.b0.front() * 0.99);
    CHECK(b.gamma < 1.0);
    // b1 stays above the diagonal and grows at roughly slope beta.
    for (std::size_t k = 0; k < b.grid1.size(); ++k) CHECK(b.b1[k] > b.grid1[k]);
    CHECK(b.tail_slope_fit == doctest::Approx(beta).epsilon(0.05));
    CHECK(!b.iteration_log.empty());
}

TEST_CASE("coarse solve is a fixed point of the update") {
    const Boundaries& b = fixture::coarse_boundaries();
    const SolverConfig c = fixture::coarse_config();
    SolveReport r;
    fixed_point_residuals(b, c, r);
    CHECK(r.residual_b1.size() == b.grid1.size());
    CHECK(r.residual_b0.size() == b.grid0.size());
    CHECK(r.max_residual < 2e-2);
    // One more update at an interior point barely moves it.
    const double x = b.grid1[4];
    CHECK(std::abs(update_point(x, BoundaryKind::B1, b, c) - b.b1[4]) < 1e-2 * (1.0 + x));
}

TEST_CASE("non-convergence carries the partial iterate") {
    SolverConfig c = fixture::coarse_config();
    c.max_sweeps = 1;
    c.tol_sup = 1e-9;
    try {
        (void)picard_solve({1.0, 2.0}, c);
        FAIL("expected NonConvergence");
    } catch (const NonConvergence& e) {
        CHECK(!e.partial().converged);
        CHECK(e.report().sweeps == 1);
        CHECK(e.partial().b1.size() == std::size_t(c.n1));
    }
}

TEST_CASE("occupation integral is the time integral of the continuation integrand") {
    const Boundaries& b = fixture::coarse_boundaries();
    const QuadratureSpec q = fixture::coarse_config().quad;
    const PhiPoint from{0.8, 0.8};
    const double a = occupation_integral(from, b, q);
    CHECK(a == continuation_integral(from, BoundaryView::of(b), b.params, q));
    CHECK(a > 0.0);
}

namespace {

// E_0[(1 + Phi1 + Phi2) 1_C(Phi_t)] by dense composite Gauss-Legendre in z1 and exact
// Gaussian pieces in z2 between switch points found by scan and bisection.
double brute_force_integrand(double t, const PhiPoint& from, const Boundaries& b) {
    const double mu = b.params.mu;
    const double a = mu * std::sqrt(0.5 * t);
    const auto in_c = [&b](const PhiPoint& p) { return classify(p, b) == Region::CONTINUE; };
    const Rule gl = gauss_legendre(4);
    const int panels = 600, scan = 400;
    const double zmax = 9.0, w = 2.0 * zmax / panels;
    double total = 0.0;
    for (int p = 0; p < panels; ++p) {
        for (std::size_t k = 0; k < gl.nodes.size(); ++k) {
            const double z1 = -zmax + (p + 0.5 * (gl.nodes[k] + 1.0)) * w;
            const double base = a * std::sqrt(3.0) * z1 - mu * mu * t;
            const auto at = [&](double z2) {
                return PhiPoint{from.phi1 * std::exp(base + a * z2), from.phi2 * std::exp(base - a * z2)};
            };
            const double e = std::exp(base + 0.5 * a * a);
            const auto piece = [&](double l, double h) {
                return (norm_cdf(h) - norm_cdf(l)) + from.phi1 * e * (norm_cdf(h - a) - norm_cdf(l - a)) +
                       from.phi2 * e * (norm_cdf(h + a) - norm_cdf(l + a));
            };
            double line = 0.0, start = -INFINITY, zp = -zmax;
            bool inp = in_c(at(zp));
            for (int j = 1; j <= scan; ++j) {
                const double z = -zmax + j * 2.0 * zmax / scan;
                const bool in = in_c(at(z));
                if (in != inp) {
                    double lo = zp, hi = z;
                    for (int it = 0; it < 60; ++it) {
                        const double mid = 0.5 * (lo + hi);
                        (in_c(at(mid)) == inp ? lo : hi) = mid;
                    }
                    if (in) start = 0.5 * (lo + hi); else line += piece(start, 0.5 * (lo + hi));
                }
                zp = z;
                inp = in;
            }
            if (inp) line += piece(start, INFINITY);
            total += 0.5 * w * gl.weights[k] * line * std::exp(-0.5 * z1 * z1) / std::sqrt(2.0 * std::acos(-1.0));
        }
    }
    return total;
}

}  // namespace

TEST_CASE("conditional continuation integrand agrees with a direct region integral") {
    const Boundaries& b = fixture::coarse_boundaries();
    const ModelParams m = b.params;
    const BoundaryView view = BoundaryView::of(b);
    for (const PhiPoint from : {PhiPoint{0.8, 0.9}, PhiPoint{1.5, 0.4}}) {
        for (const double t : {0.05, 0.5, 2.0}) {
            const double a = continuation_integrand(t, from, view, m, 40);
            const double d = brute_force_integrand(t, from, b);
            CHECK(a == doctest::Approx(d).epsilon(2e-5).scale(1.0));
            CHECK(a <= 1.0 + from.phi1 + from.phi2);
        }
    }
}

#pragma once

#include <span>

#include "driftdet/boundaries.hpp"
#include "driftdet/transition.hpp"

namespace driftdet {

/// Boundary curves as seen by the continuation integral. The solver evaluates trial
/// iterates by moving a whole curve: b0 by an additive shift, b1 by a relative one.
struct BoundaryView {
    std::span<const double> g0, b0, g1, b1;
    double gamma = 0.0;       ///< diagonal end of the unshifted b0 curve
    double tail_slope = 1.0;  ///< b1 slope beyond g1.back()
    double shift0 = 0.0;  ///< b0 -> b0 + shift0
    double shift1 = 0.0;  ///< b1 -> b1 * (1 + shift1)

    static BoundaryView of(const Boundaries& b);

    [[nodiscard]] double b0ext(double v) const;
    [[nodiscard]] double b1ext(double v) const;
    /// Continuation along the larger coordinate, given the smaller one v, is (lower(v), upper(v)).
    [[nodiscard]] double lower(double v) const;
    [[nodiscard]] double upper(double v) const;
    /// Smaller-coordinate value where the shifted b0 meets the diagonal (0 if it never does).
    [[nodiscard]] double crossing() const;
};

/// E_0[(1 + Phi^1_t + Phi^2_t) 1_C(Phi_t)] for the continuation set C of `view`.
/// Each half {Phi_i >= Phi_j} is integrated by conditioning on log Phi_j: the inner
/// probability is a difference of normal CDFs and the outer variable uses composite
/// Gauss-Legendre on [-8.5, 8.5] standard deviations, split where b0 meets the diagonal
/// and at boundary knots whose kink is large enough to matter.
double continuation_integrand(double t, const PhiPoint& from, const BoundaryView& view,
                              const ModelParams& params, int nodes_per_piece);

/// Time integral of continuation_integrand over (0, inf).
double continuation_integral(const PhiPoint& from, const BoundaryView& view,
                             const ModelParams& params, const QuadratureSpec& spec);

}  // namespace driftdet

#pragma once

#include <stdexcept>
#include <vector>

#include "driftdet/boundaries.hpp"
#include "driftdet/transition.hpp"

namespace driftdet {

enum class BoundaryKind { B0, B1 };

enum class Execution { Serial, Parallel };

struct SolverConfig {
    int n0 = 41;
    int n1 = 61;
    double phi_max = 0.0;     ///< <= 0 selects 10 * beta
    double damping = 1.0;
    double tol_sup = 1e-3;
    double stop_fraction = 0.02; ///< iterate until change <= stop_fraction * tol_sup
    int max_sweeps = 80;
    QuadratureSpec quad;
    double root_tol = 1e-6;   ///< absolute tolerance on boundary values
    double init_scale = 1.0;  ///< b1 starts at init_scale * beta * (1 + phi)
    int anderson_depth = 5;   ///< 0 = plain damped Picard
    Execution execution = Execution::Parallel;
    int threads = 0;          ///< 0 = OpenMP default

    void validate(const ModelParams& params) const;
    [[nodiscard]] double resolved_phi_max(const ModelParams& params) const;
};

struct SolveReport {
    int sweeps = 0;
    double final_change = 0.0;
    double projection_change = 0.0;  ///< largest relative move made by the last shape projection
    int clamped_points = 0;          ///< last sweep: updates that hit their bracket end
    std::vector<double> residual_b0; ///< |x + b0 - I/c| / (1 + x) on grid0
    std::vector<double> residual_b1; ///< |1 + x - I/c| / (1 + x) on grid1
    double max_residual = 0.0;
    double seconds = 0.0;
};

/// Thrown when the sup-norm change is still above tol_sup after max_sweeps.
/// Reaching only tol_sup (not stop_fraction * tol_sup) by then still counts as converged.
class NonConvergence : public std::runtime_error {
public:
    NonConvergence(Boundaries partial, SolveReport report)
        : std::runtime_error("Picard iteration did not converge"),
          partial_(std::move(partial)), report_(std::move(report)) {}
    [[nodiscard]] const Boundaries& partial() const noexcept { return partial_; }
    [[nodiscard]] const SolveReport& report() const noexcept { return report_; }

private:
    Boundaries partial_;
    SolveReport report_;
};

/// Starting iterate: b1 = init_scale * beta (1 + phi), b0 linear from 1/beta to gamma0 = (1/beta + 1)/2.
Boundaries initial_boundaries(const ModelParams& params, const SolverConfig& cfg);

/// I(x, y; b): integrated Ĥ-weighted occupation of the continuation set of b started at (x, y).
double occupation_integral(const PhiPoint& from, const Boundaries& b, const QuadratureSpec& quad);

/// One Picard update of the boundary value at grid abscissa x, given the frozen iterate b.
/// The shift s solving M̂(x, b(x) + s) = I(x, b(x) + s; b shifted by s) is found by a local
/// bracket search and TOMS 748; the result is b(x) + damping * s.
double update_point(double x, BoundaryKind which, const Boundaries& b, const SolverConfig& cfg);

/// Damped Jacobi-Picard iteration with shape projection after every sweep, optionally
/// Anderson-extrapolated over the last anderson_depth sweeps.
Boundaries picard_solve(const ModelParams& params, const SolverConfig& cfg, SolveReport* report = nullptr);

/// Continue iterating from a given iterate.
Boundaries picard_solve_from(Boundaries start, const SolverConfig& cfg, SolveReport* report = nullptr);

/// Fixed-point residuals of b at its own grid points.
void fixed_point_residuals(const Boundaries& b, const SolverConfig& cfg, SolveReport& report);

}  // namespace driftdet

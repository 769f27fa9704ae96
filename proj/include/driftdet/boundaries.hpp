#pragma once

#include <span>
#include <string>
#include <vector>

#include "driftdet/model.hpp"

namespace driftdet {

enum class Region { CONTINUE, STOP_D0, STOP_D1, STOP_D2 };

const char* region_name(Region r) noexcept;

/// Discretized stopping boundaries.
///  - b0 on grid0 (uniform on [0, gamma]): D0 = {phi_i <= b0(phi_j)} with phi_i >= phi_j.
///  - b1 on grid1 ({0} and log-spaced up to phi_max): D1/D2 = {phi_i >= b1(phi_j)}.
/// Beyond grid1.back() b1 continues from its last value along slope asym_slope (= beta).
struct Boundaries {
    ModelParams params;
    double beta = 1.0;
    double gamma = 0.0;
    std::vector<double> grid0, b0;
    std::vector<double> grid1, b1;
    double asym_slope = 1.0;      ///< beta; used for extrapolation
    double asym_intercept = 0.0;  ///< mean of b1 - beta * phi over the tail points
    double tail_slope_fit = 1.0;  ///< free least-squares slope through the tail points
    std::vector<double> iteration_log;
    bool converged = false;

    /// b0 on [0, gamma]; continued past gamma along the last segment's slope.
    [[nodiscard]] double b0_at(double v) const;
    [[nodiscard]] double b1_at(double v) const;

    /// Refit asym_intercept and tail_slope_fit from the last `n` points of b1.
    void fit_asymptote(std::size_t n = 10);

    /// Throws std::invalid_argument when sizes or orderings are inconsistent.
    void validate() const;
};

/// Region of phi under the rule of b.
Region classify(const PhiPoint& phi, const Boundaries& b);

/// Piecewise-linear interpolation on an increasing grid; linear extension past both ends.
double interp_linear(std::span<const double> x, std::span<const double> y, double v);

/// Greatest convex minorant (upper = false) or least concave majorant (upper = true)
/// of the points (x_k, y_k), evaluated back at the x_k.
std::vector<double> hull_project(std::span<const double> x, std::span<const double> y, bool upper);

/// Root of b0(phi) - phi using linear interpolation, extended along the end slope.
double diagonal_crossing(std::span<const double> x, std::span<const double> y);

struct SymmetryReport {
    /// max over grid0 (phi > 0) of |1/b0(phi) - b1(psi)/psi| * b0(phi), psi = b0(phi)/phi.
    double correspondence = 0.0;
    /// |tail_slope_fit - beta| / beta.
    double slope = 0.0;
};

SymmetryReport symmetry_residuals(const Boundaries& b);

inline constexpr int kBoundariesFormatVersion = 1;

}  // namespace driftdet

#pragma once

#include <functional>

#include "driftdet/model.hpp"

namespace driftdet {

/// Law of (log Phi^1_t, log Phi^2_t) under P0 started at phi (both coordinates > 0).
struct LogGaussianLaw {
    double mean1 = 0.0;
    double mean2 = 0.0;
    double var = 0.0;  ///< 2 mu^2 t
    double cov = 0.0;  ///< mu^2 t
};

struct QuadratureSpec {
    int n_hermite = 40;      ///< nodes per Gaussian dimension (per piece in the conditional rule)
    int time_panels = 24;    ///< cap on the number of geometric time panels
    double t_max = 500.0;    ///< horizon in units of 1/mu^2
    double tail_tol = 1e-10; ///< stop adding panels once one contributes less than this
    int time_nodes = 10;     ///< Gauss-Legendre nodes per time panel

    void validate() const;
    friend bool operator==(const QuadratureSpec&, const QuadratureSpec&) = default;
};

LogGaussianLaw log_law(double t, const PhiPoint& from, const ModelParams& params);

/// Transition density of Phi_t at `to` given Phi_0 = `from`, with respect to d psi1 d psi2.
double density(double t, const PhiPoint& from, const PhiPoint& to, const ModelParams& params);

/// Exact draw of Phi_t from standard normal noise (W^i_t = sqrt(t) z_i). Zeros stay zero.
PhiPoint sample_phi(double t, const PhiPoint& from, const ModelParams& params, double z1, double z2);

using RegionTest = std::function<bool(const PhiPoint&)>;

/// E_0[(1 + Phi^1_t + Phi^2_t) 1{region(Phi_t)}].
/// Gauss-Hermite over W^1; along each W^2 line the indicator's switch points are
/// located by a scan plus bisection and the Gaussian integral between them is exact.
double expect_H_over_region(double t, const PhiPoint& from, const RegionTest& region,
                            const ModelParams& params, const QuadratureSpec& spec);

/// |L M_check - H| at phi, with L evaluated by central differences of step h.
double generator_residual(const PhiPoint& phi, const ModelParams& params, double h);

/// Integral over t in (0, horizon) of f(t), on geometric panels [t1 2^(k-1), t1 2^k]
/// with t1 = 0.05 / mu^2 and spec.time_nodes Gauss-Legendre nodes per panel. The first panel uses
/// t = t1 u^2 to absorb the sqrt(t) behaviour of boundary-started integrands.
double integrate_time(const std::function<double(double)>& f, const ModelParams& params,
                      const QuadratureSpec& spec);

}  // namespace driftdet

#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "driftdet/boundaries.hpp"
#include "driftdet/solver.hpp"

namespace driftdet {

enum class Measure { P_PI, P_ZERO };

struct SimConfig {
    double dt = 1e-3;
    std::int64_t n_paths = 10000;
    std::uint64_t seed = 1;
    double t_cap = 0.0;  ///< <= 0 selects 50 / mu^2
    Measure measure = Measure::P_PI;
    Execution execution = Execution::Parallel;
    int threads = 0;       ///< 0 = OpenMP default; never changes results
    int trace_paths = 0;   ///< record the first min(trace_paths, 100) paths

    void validate() const;
    [[nodiscard]] double resolved_t_cap(const ModelParams& params) const;
};

struct TraceRow {
    std::int64_t path = 0;
    double t = 0.0;
    double phi1 = 0.0;
    double phi2 = 0.0;
    Region region = Region::CONTINUE;
};

struct RiskReport {
    Measure measure = Measure::P_PI;
    std::int64_t n_paths = 0;
    double mean_loss = 0.0;
    double std_err = 0.0;
    double mean_tau = 0.0;
    double std_err_tau = 0.0;
    /// P(d != i | theta = i); zero under P_ZERO, where theta is not drawn.
    std::array<double, 3> error_rate_by_hypothesis{};
    std::array<std::int64_t, 3> count_by_hypothesis{};
    double capped_fraction = 0.0;
    bool cap_warning = false;  ///< more than 1% of paths reached t_cap
    /// Share of stopped paths still classified as stopping one step after tau.
    double absorption_fraction = 1.0;
    std::vector<TraceRow> trace;
};

/// Bayes risk E_pi[tau + c 1{d != theta}] by simulating theta and X exactly on the dt grid.
RiskReport simulate_risk_ppi(const Prior& prior, const ModelParams& params, const Boundaries& b,
                             const SimConfig& cfg);

/// E_0[int_0^tau (1 + Phi^1 + Phi^2) dt + M̂(Phi_tau)] with Phi sampled exactly, integral by trapezoid.
RiskReport simulate_value_p0(const PhiPoint& phi0, const ModelParams& params, const Boundaries& b,
                             const SimConfig& cfg);

/// One-coordinate problem under P_0: stop when Phi leaves (lower, upper); running cost
/// 1 + Phi when unit_cost, else Phi; terminal cost c min(1, Phi).
RiskReport simulate_oned_p0(double phi0, const ModelParams& params, double lower, double upper,
                            bool unit_cost, const SimConfig& cfg);

/// Sample mean and standard error of Phi_t under P_0 (no stopping), per coordinate.
struct MartingaleCheck {
    std::array<double, 2> mean{};
    std::array<double, 2> std_err{};
};
MartingaleCheck martingale_check(const PhiPoint& phi0, double t, const ModelParams& params,
                                 const SimConfig& cfg);

}  // namespace driftdet

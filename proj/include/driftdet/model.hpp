#pragma once

#include <array>
#include <cstddef>

namespace driftdet {

/// Problem instance: drift magnitude of the active coordinate and the
/// weight on a wrong terminal decision (in units of observation time).
struct ModelParams {
    double mu = 1.0;
    double c = 2.0;

    /// c * mu^2, the only combination entering the one-dimensional thresholds.
    [[nodiscard]] double cmu2() const noexcept { return c * mu * mu; }

    /// Throws std::invalid_argument unless mu != 0, c > 0 and both are finite.
    void validate() const;

    friend bool operator==(const ModelParams&, const ModelParams&) = default;
};

struct Prior {
    double pi0 = 1.0;
    double pi1 = 0.0;
    double pi2 = 0.0;

    void validate() const;
};

/// State of the posterior-ratio diffusion: (Pi^1/Pi^0, Pi^2/Pi^0).
struct PhiPoint {
    double phi1 = 0.0;
    double phi2 = 0.0;

    [[nodiscard]] PhiPoint swapped() const noexcept { return {phi2, phi1}; }
    friend bool operator==(const PhiPoint&, const PhiPoint&) = default;
};

struct Posterior {
    double p0 = 1.0;
    double p1 = 0.0;
    double p2 = 0.0;

    [[nodiscard]] std::array<double, 3> as_array() const noexcept { return {p0, p1, p2}; }
};

[[nodiscard]] PhiPoint prior_to_phi(const Prior& prior);
[[nodiscard]] Posterior phi_to_posterior(const PhiPoint& phi);

/// Terminal loss in ratio coordinates: c * min(phi1 + phi2, 1 + phi1, 1 + phi2).
double loss_hat(const PhiPoint& phi, const ModelParams& params) noexcept;

/// Running cost density 1 + phi1 + phi2.
double gain_hat(const PhiPoint& phi) noexcept;

/// Terminal loss on the simplex: c * min(1 - pi_i).
double loss_posterior(const Posterior& post, const ModelParams& params) noexcept;

/// Mayer correction whose generator image is gain_hat. Requires phi1, phi2 > 0.
double mayer_check(const PhiPoint& phi, const ModelParams& params);

/// argmax of the posterior; ties resolve to the lowest index.
std::size_t terminal_decision(const Posterior& post) noexcept;

}  // namespace driftdet

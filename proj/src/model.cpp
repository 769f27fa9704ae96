#include "driftdet/model.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "driftdet/errors.hpp"

namespace driftdet {

void ModelParams::validate() const {
    if (!std::isfinite(mu) || mu == 0.0) {
        throw std::invalid_argument("mu must be finite and non-zero");
    }
    if (!std::isfinite(c) || c <= 0.0) {
        throw std::invalid_argument("c must be finite and positive");
    }
}

void Prior::validate() const {
    for (double p : {pi0, pi1, pi2}) {
        if (!(p >= 0.0 && p <= 1.0)) {
            throw std::invalid_argument("prior probabilities must lie in [0,1]");
        }
    }
    if (std::abs(pi0 + pi1 + pi2 - 1.0) > 1e-12) {
        throw std::invalid_argument("prior probabilities must sum to 1");
    }
}

PhiPoint prior_to_phi(const Prior& prior) {
    prior.validate();
    if (prior.pi0 == 0.0) {
        throw DegeneratePrior("pi0 = 0: permute hypotheses before mapping to ratio coordinates");
    }
    return {prior.pi1 / prior.pi0, prior.pi2 / prior.pi0};
}

Posterior phi_to_posterior(const PhiPoint& phi) {
    const double z = 1.0 + phi.phi1 + phi.phi2;
    return {1.0 / z, phi.phi1 / z, phi.phi2 / z};
}

double loss_hat(const PhiPoint& phi, const ModelParams& params) noexcept {
    return params.c * std::min({phi.phi1 + phi.phi2, 1.0 + phi.phi1, 1.0 + phi.phi2});
}

double gain_hat(const PhiPoint& phi) noexcept { return 1.0 + phi.phi1 + phi.phi2; }

double loss_posterior(const Posterior& post, const ModelParams& params) noexcept {
    return params.c * std::min({1.0 - post.p0, 1.0 - post.p1, 1.0 - post.p2});
}

double mayer_check(const PhiPoint& phi, const ModelParams& params) {
    if (!(phi.phi1 > 0.0 && phi.phi2 > 0.0)) {
        throw DomainError("mayer_check needs phi1 > 0 and phi2 > 0");
    }
    const double l1 = std::log(phi.phi1);
    const double l2 = std::log(phi.phi2);
    return (phi.phi1 * (l1 - 1.0) + phi.phi2 * (l2 - 1.0) - 0.5 * (l1 + l2)) /
           (params.mu * params.mu);
}

std::size_t terminal_decision(const Posterior& post) noexcept {
    const auto p = post.as_array();
    std::size_t best = 0;
    for (std::size_t i = 1; i < p.size(); ++i) {
        if (p[i] > p[best]) best = i;
    }
    return best;
}

}  // namespace driftdet

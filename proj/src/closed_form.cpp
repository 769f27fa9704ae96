#include "driftdet/closed_form.hpp"

#include <algorithm>
#include <cmath>

#include "driftdet/errors.hpp"

namespace driftdet {

namespace {

double beta_equation(double b, double target) { return b - 1.0 / b + 2.0 * std::log(b) - target; }

}  // namespace

double solve_beta(const ModelParams& params) {
    params.validate();
    const double target = params.cmu2();
    // f(1) = -target < 0 and f(1 + target) > 0 since b - 1/b > b - 1 for b > 1.
    double lo = 1.0;
    double hi = 1.0 + target;
    double b = 1.0 + 0.5 * target;
    for (int iter = 0; iter < 200; ++iter) {
        const double f = beta_equation(b, target);
        if (f == 0.0) return b;
        if (f < 0.0) lo = b; else hi = b;
        const double df = 1.0 + 1.0 / (b * b) + 2.0 / b;
        double next = b - f / df;
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        if (std::abs(next - b) <= 1e-16 * b) return next;
        b = next;
    }
    return b;
}

OneDSolution solve_oned(const ModelParams& params) {
    const double beta = solve_beta(params);
    const double mu2 = params.mu * params.mu;
    const double a = params.c - (beta + std::log(beta) - 1.0) / mu2;
    return {beta, 1.0 / beta, a, a};
}

double oned_value(double phi, const OneDSolution& sol, const ModelParams& params) {
    if (!(phi >= 0.0)) throw DomainError("oned_value needs phi >= 0");
    if (phi <= sol.alpha || phi >= sol.beta) return params.c * std::min(1.0, phi);
    const double mu2 = params.mu * params.mu;
    return sol.A * phi + sol.B + (1.0 - phi) * std::log(phi) / mu2;
}

double oned_value(double phi, const ModelParams& params) {
    return oned_value(phi, solve_oned(params), params);
}

AuxOneDSolution aux_solution(const ModelParams& params) {
    params.validate();
    const double x = params.cmu2();
    const double mu2 = params.mu * params.mu;
    AuxOneDSolution s;
    s.phi0_tilde = x / std::expm1(x);
    s.phi1_tilde = x / -std::expm1(-x);
    s.A_tilde = params.c + std::log(s.phi0_tilde) / mu2;
    s.B_tilde = -s.phi0_tilde / mu2;
    return s;
}

double aux_value(double phi, const AuxOneDSolution& sol, const ModelParams& params) {
    if (!(phi >= 0.0)) throw DomainError("aux_value needs phi >= 0");
    if (phi <= sol.phi0_tilde || phi >= sol.phi1_tilde) return params.c * std::min(1.0, phi);
    const double mu2 = params.mu * params.mu;
    return sol.A_tilde * phi + sol.B_tilde + phi * (1.0 - std::log(phi)) / mu2;
}

double aux_value(double phi, const ModelParams& params) {
    return aux_value(phi, aux_solution(params), params);
}

}  // namespace driftdet

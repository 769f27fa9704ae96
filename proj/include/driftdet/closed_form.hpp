#pragma once

#include "driftdet/model.hpp"

namespace driftdet {

/// Exact solution of the one-coordinate problem (one ratio pinned at 0):
/// stop outside (alpha, beta), value A*(1 + phi) + (1 - phi) log(phi) / mu^2 inside.
struct OneDSolution {
    double beta = 1.0;
    double alpha = 1.0;  ///< 1 / beta
    double A = 0.0;
    double B = 0.0;      ///< equals A
};

/// Exact solution of the auxiliary problem with running cost phi (no constant term).
struct AuxOneDSolution {
    double phi0_tilde = 1.0;
    double phi1_tilde = 1.0;
    double A_tilde = 0.0;
    double B_tilde = 0.0;
};

/// Unique root in (1, inf) of beta - 1/beta + 2 log(beta) = c mu^2.
/// Safeguarded Newton on the bracket [1, 1 + c mu^2].
double solve_beta(const ModelParams& params);

OneDSolution solve_oned(const ModelParams& params);

double oned_value(double phi, const OneDSolution& sol, const ModelParams& params);
double oned_value(double phi, const ModelParams& params);

AuxOneDSolution aux_solution(const ModelParams& params);

double aux_value(double phi, const AuxOneDSolution& sol, const ModelParams& params);
double aux_value(double phi, const ModelParams& params);

}  // namespace driftdet

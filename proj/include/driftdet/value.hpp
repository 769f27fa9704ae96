#pragma once

#include <vector>

#include "driftdet/boundaries.hpp"
#include "driftdet/solver.hpp"

namespace driftdet {

struct ValueReport {
    PhiPoint phi;
    double v_hat = 0.0;
    double m_hat = 0.0;
    double integral = 0.0;  ///< raw continuation integral (= m_hat when not evaluated)
    Region in_region = Region::CONTINUE;
};

/// Value of the ratio-coordinate problem under the rule of b: M̂ in the stopping set,
/// min(I(phi; b), M̂) otherwise, I being the continuation integral.
double value_hat(const PhiPoint& phi, const Boundaries& b, const SolverConfig& cfg);

ValueReport value_report(const PhiPoint& phi, const Boundaries& b, const SolverConfig& cfg);

/// Batch evaluation; results in input order regardless of cfg.execution.
std::vector<ValueReport> value_batch(const std::vector<PhiPoint>& points, const Boundaries& b,
                                     const SolverConfig& cfg);

/// Bayes risk of the original problem: pi0 * value_hat(pi1/pi0, pi2/pi0).
double value_original(const Prior& prior, const ModelParams& params, const Boundaries& b,
                      const SolverConfig& cfg);

/// Throws BoundaryMismatch unless b was computed for params.
void require_matching(const ModelParams& params, const Boundaries& b);

}  // namespace driftdet

#include "driftdet/value.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>

#include "driftdet/continuation.hpp"
#include "driftdet/errors.hpp"
#include "driftdet/parallel.hpp"

namespace driftdet {

void require_matching(const ModelParams& params, const Boundaries& b) {
    if (!(b.params == params)) throw BoundaryMismatch("boundaries were computed for different (mu, c)");
}

double value_hat(const PhiPoint& phi, const Boundaries& b, const SolverConfig& cfg) {
    return value_report(phi, b, cfg).v_hat;
}

ValueReport value_report(const PhiPoint& phi, const Boundaries& b, const SolverConfig& cfg) {
    if (!(phi.phi1 >= 0.0 && phi.phi2 >= 0.0) || !std::isfinite(phi.phi1) || !std::isfinite(phi.phi2)) {
        throw DomainError("value_hat needs finite non-negative coordinates");
    }
    ValueReport r;
    r.phi = phi;
    r.m_hat = loss_hat(phi, b.params);
    r.in_region = classify(phi, b);
    if (r.in_region != Region::CONTINUE) {
        r.integral = r.m_hat;
        r.v_hat = r.m_hat;
        return r;
    }
    r.integral = continuation_integral(phi, BoundaryView::of(b), b.params, cfg.quad);
    // Stopping is always admissible, so the value never exceeds M̂; near the boundary the
    // integral can overshoot it by the solver's residual.
    r.v_hat = std::min(r.integral, r.m_hat);
    return r;
}

std::vector<ValueReport> value_batch(const std::vector<PhiPoint>& points, const Boundaries& b,
                                     const SolverConfig& cfg) {
    std::vector<ValueReport> out(points.size());
    const auto n = static_cast<std::int64_t>(points.size());
    if (cfg.execution == Execution::Parallel) {
#pragma omp parallel for schedule(dynamic, 1) num_threads(worker_count(cfg.threads))
        for (std::int64_t i = 0; i < n; ++i) out[std::size_t(i)] = value_report(points[std::size_t(i)], b, cfg);
    } else {
        for (std::int64_t i = 0; i < n; ++i) out[std::size_t(i)] = value_report(points[std::size_t(i)], b, cfg);
    }
    return out;
}

double value_original(const Prior& prior, const ModelParams& params, const Boundaries& b,
                      const SolverConfig& cfg) {
    require_matching(params, b);
    const PhiPoint phi = prior_to_phi(prior);
    return prior.pi0 * value_hat(phi, b, cfg);
}

}  // namespace driftdet

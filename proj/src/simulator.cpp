#include "driftdet/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>
#include <stdexcept>

#include "driftdet/errors.hpp"
#include "driftdet/parallel.hpp"
#include "driftdet/transition.hpp"
#include "driftdet/value.hpp"

namespace driftdet {

namespace {

constexpr int kMaxTrace = 100;

// Independent stream per (seed, path): worker count and schedule never touch the draws.
class PathStream {
public:
    PathStream(std::uint64_t seed, std::int64_t path) {
        const auto p = static_cast<std::uint64_t>(path);
        std::seed_seq seq{std::uint32_t(seed), std::uint32_t(seed >> 32), std::uint32_t(p),
                          std::uint32_t(p >> 32), 0x5eedu};
        eng_.seed(seq);
    }
    double normal() { return normal_(eng_); }
    double uniform() { return std::generate_canonical<double, 64>(eng_); }

private:
    std::mt19937_64 eng_;
    std::normal_distribution<double> normal_;
};

struct PathOutcome {
    double loss = 0.0;
    double tau = 0.0;
    int theta = -1;
    bool wrong = false;
    bool capped = false;
    bool absorbed = true;
};

using PathKernel = std::function<PathOutcome(std::int64_t, std::vector<TraceRow>*)>;

RiskReport run_paths(const SimConfig& cfg, Measure measure, const PathKernel& kernel) {
    const std::int64_t n = cfg.n_paths;
    std::vector<PathOutcome> out(static_cast<std::size_t>(n));
    const int n_trace = std::min({cfg.trace_paths, kMaxTrace, int(std::min<std::int64_t>(n, kMaxTrace))});
    std::vector<std::vector<TraceRow>> traces(static_cast<std::size_t>(std::max(n_trace, 0)));
    auto body = [&](std::int64_t i) {
        std::vector<TraceRow>* tr = i < n_trace ? &traces[std::size_t(i)] : nullptr;
        out[std::size_t(i)] = kernel(i, tr);
    };
    if (cfg.execution == Execution::Parallel) {
#pragma omp parallel for schedule(dynamic, 256) num_threads(worker_count(cfg.threads))
        for (std::int64_t i = 0; i < n; ++i) body(i);
    } else {
        for (std::int64_t i = 0; i < n; ++i) body(i);
    }

    // Fixed path-order reduction.
    RiskReport r;
    r.measure = measure;
    r.n_paths = n;
    double s = 0.0, s2 = 0.0, st = 0.0, st2 = 0.0;
    std::int64_t capped = 0, stopped = 0, absorbed = 0;
    std::array<std::int64_t, 3> wrong{};
    for (const PathOutcome& o : out) {
        s += o.loss;
        s2 += o.loss * o.loss;
        st += o.tau;
        st2 += o.tau * o.tau;
        if (o.capped) {
            ++capped;
        } else {
            ++stopped;
            if (o.absorbed) ++absorbed;
        }
        if (o.theta >= 0) {
            ++r.count_by_hypothesis[std::size_t(o.theta)];
            if (o.wrong) ++wrong[std::size_t(o.theta)];
        }
    }
    const double dn = double(n);
    r.mean_loss = s / dn;
    r.mean_tau = st / dn;
    auto se = [dn](double sum, double sum2) {
        if (dn < 2.0) return 0.0;
        const double m = sum / dn;
        return std::sqrt(std::max(0.0, (sum2 - dn * m * m) / (dn - 1.0)) / dn);
    };
    r.std_err = se(s, s2);
    r.std_err_tau = se(st, st2);
    for (std::size_t k = 0; k < 3; ++k) {
        r.error_rate_by_hypothesis[k] =
            r.count_by_hypothesis[k] > 0 ? double(wrong[k]) / double(r.count_by_hypothesis[k]) : 0.0;
    }
    r.capped_fraction = double(capped) / dn;
    r.cap_warning = r.capped_fraction > 0.01;
    r.absorption_fraction = stopped > 0 ? double(absorbed) / double(stopped) : 1.0;
    for (auto& t : traces) r.trace.insert(r.trace.end(), t.begin(), t.end());
    return r;
}

}  // namespace

void SimConfig::validate() const {
    if (!(dt > 0.0) || !std::isfinite(dt)) throw std::invalid_argument("dt must be > 0");
    if (n_paths < 1) throw std::invalid_argument("n_paths must be >= 1");
    if (threads < 0) throw std::invalid_argument("threads must be >= 0");
    if (std::isnan(t_cap)) throw std::invalid_argument("t_cap must not be NaN");
}

double SimConfig::resolved_t_cap(const ModelParams& params) const {
    return t_cap > 0.0 ? t_cap : 50.0 / (params.mu * params.mu);
}

RiskReport simulate_risk_ppi(const Prior& prior, const ModelParams& params, const Boundaries& b,
                             const SimConfig& cfg) {
    cfg.validate();
    params.validate();
    require_matching(params, b);
    const PhiPoint phi0 = prior_to_phi(prior);
    const double mu = params.mu;
    const double dt = cfg.dt;
    const double sdt = std::sqrt(dt);
    const auto max_steps = static_cast<std::int64_t>(std::ceil(cfg.resolved_t_cap(params) / dt - 1e-9));

    auto kernel = [&](std::int64_t path, std::vector<TraceRow>* trace) {
        PathStream rng(cfg.seed, path);
        const double u = rng.uniform();
        const int theta = u < prior.pi0 ? 0 : (u < prior.pi0 + prior.pi1 ? 1 : 2);
        double l1 = 0.0, l2 = 0.0;  // mu (X^i - X^0)
        auto phi_at = [&](double a1, double a2) {
            return PhiPoint{phi0.phi1 == 0.0 ? 0.0 : phi0.phi1 * std::exp(a1),
                            phi0.phi2 == 0.0 ? 0.0 : phi0.phi2 * std::exp(a2)};
        };
        auto advance = [&](double& a1, double& a2) {
            double dx[3];
            for (int j = 0; j < 3; ++j) dx[j] = (theta == j ? mu * dt : 0.0) + sdt * rng.normal();
            a1 += mu * (dx[1] - dx[0]);
            a2 += mu * (dx[2] - dx[0]);
        };
        PhiPoint phi = phi0;
        std::int64_t k = 0;
        PathOutcome o;
        o.theta = theta;
        Region reg = classify(phi, b);
        while (true) {
            if (trace) trace->push_back({path, double(k) * dt, phi.phi1, phi.phi2, reg});
            if (reg != Region::CONTINUE) break;
            if (k >= max_steps) {
                o.capped = true;
                break;
            }
            advance(l1, l2);
            ++k;
            phi = phi_at(l1, l2);
            reg = classify(phi, b);
        }
        o.tau = double(k) * dt;
        const auto d = static_cast<int>(terminal_decision(phi_to_posterior(phi)));
        o.wrong = d != theta;
        o.loss = o.tau + (o.wrong ? params.c : 0.0);
        if (!o.capped) {
            double a1 = l1, a2 = l2;
            advance(a1, a2);
            o.absorbed = classify(phi_at(a1, a2), b) != Region::CONTINUE;
        }
        return o;
    };
    return run_paths(cfg, Measure::P_PI, kernel);
}

RiskReport simulate_value_p0(const PhiPoint& phi0, const ModelParams& params, const Boundaries& b,
                             const SimConfig& cfg) {
    cfg.validate();
    params.validate();
    require_matching(params, b);
    if (!(phi0.phi1 >= 0.0 && phi0.phi2 >= 0.0)) throw DomainError("phi0 must be non-negative");
    const double dt = cfg.dt;
    const auto max_steps = static_cast<std::int64_t>(std::ceil(cfg.resolved_t_cap(params) / dt - 1e-9));

    auto kernel = [&](std::int64_t path, std::vector<TraceRow>* trace) {
        PathStream rng(cfg.seed, path);
        PhiPoint phi = phi0;
        double h = gain_hat(phi);
        double integral = 0.0;
        std::int64_t k = 0;
        PathOutcome o;
        Region reg = classify(phi, b);
        while (true) {
            if (trace) trace->push_back({path, double(k) * dt, phi.phi1, phi.phi2, reg});
            if (reg != Region::CONTINUE) break;
            if (k >= max_steps) {
                o.capped = true;
                break;
            }
            const double z1 = rng.normal();
            const double z2 = rng.normal();
            phi = sample_phi(dt, phi, params, z1, z2);
            ++k;
            const double hn = gain_hat(phi);
            integral += 0.5 * dt * (h + hn);
            h = hn;
            reg = classify(phi, b);
        }
        o.tau = double(k) * dt;
        o.loss = integral + loss_hat(phi, params);
        if (!o.capped) {
            const double z1 = rng.normal();
            const double z2 = rng.normal();
            o.absorbed = classify(sample_phi(dt, phi, params, z1, z2), b) != Region::CONTINUE;
        }
        return o;
    };
    return run_paths(cfg, Measure::P_ZERO, kernel);
}

RiskReport simulate_oned_p0(double phi0, const ModelParams& params, double lower, double upper,
                            bool unit_cost, const SimConfig& cfg) {
    cfg.validate();
    params.validate();
    if (!(phi0 >= 0.0)) throw DomainError("phi0 must be non-negative");
    if (!(lower < upper)) throw std::invalid_argument("need lower < upper");
    const double dt = cfg.dt;
    const auto max_steps = static_cast<std::int64_t>(std::ceil(cfg.resolved_t_cap(params) / dt - 1e-9));
    const double k0 = unit_cost ? 1.0 : 0.0;
    auto inside = [&](double p) { return p > lower && p < upper; };

    auto kernel = [&](std::int64_t path, std::vector<TraceRow>*) {
        PathStream rng(cfg.seed, path);
        PhiPoint phi{phi0, 0.0};
        double integral = 0.0;
        std::int64_t k = 0;
        PathOutcome o;
        while (inside(phi.phi1)) {
            if (k >= max_steps) {
                o.capped = true;
                break;
            }
            const double z1 = rng.normal();
            const double z2 = rng.normal();
            const PhiPoint next = sample_phi(dt, phi, params, z1, z2);
            integral += 0.5 * dt * (2.0 * k0 + phi.phi1 + next.phi1);
            phi = next;
            ++k;
        }
        o.tau = double(k) * dt;
        o.loss = integral + params.c * std::min(1.0, phi.phi1);
        return o;
    };
    return run_paths(cfg, Measure::P_ZERO, kernel);
}

MartingaleCheck martingale_check(const PhiPoint& phi0, double t, const ModelParams& params,
                                 const SimConfig& cfg) {
    cfg.validate();
    if (!(t > 0.0)) throw DomainError("t must be > 0");
    const std::int64_t n = cfg.n_paths;
    std::vector<PhiPoint> draws(static_cast<std::size_t>(n));
    if (cfg.execution == Execution::Parallel) {
#pragma omp parallel for schedule(static) num_threads(worker_count(cfg.threads))
        for (std::int64_t i = 0; i < n; ++i) {
            PathStream rng(cfg.seed, i);
            const double z1 = rng.normal();
            const double z2 = rng.normal();
            draws[std::size_t(i)] = sample_phi(t, phi0, params, z1, z2);
        }
    } else {
        for (std::int64_t i = 0; i < n; ++i) {
            PathStream rng(cfg.seed, i);
            const double z1 = rng.normal();
            const double z2 = rng.normal();
            draws[std::size_t(i)] = sample_phi(t, phi0, params, z1, z2);
        }
    }
    MartingaleCheck m;
    double s[2] = {0, 0}, s2[2] = {0, 0};
    for (const PhiPoint& p : draws) {
        s[0] += p.phi1;
        s[1] += p.phi2;
        s2[0] += p.phi1 * p.phi1;
        s2[1] += p.phi2 * p.phi2;
    }
    const double dn = double(n);
    for (int j = 0; j < 2; ++j) {
        m.mean[std::size_t(j)] = s[j] / dn;
        const double var = std::max(0.0, (s2[j] - dn * m.mean[std::size_t(j)] * m.mean[std::size_t(j)]) / std::max(dn - 1.0, 1.0));
        m.std_err[std::size_t(j)] = std::sqrt(var / dn);
    }
    return m;
}

}  // namespace driftdet

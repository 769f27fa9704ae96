#include "driftdet/transition.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "driftdet/errors.hpp"
#include "driftdet/quadrature.hpp"

namespace driftdet {

void QuadratureSpec::validate() const {
    if (n_hermite < 8) throw std::invalid_argument("n_hermite must be >= 8");
    if (time_panels < 1) throw std::invalid_argument("time_panels must be >= 1");
    if (!(t_max > 0.0)) throw std::invalid_argument("t_max must be > 0");
    if (!(tail_tol > 0.0)) throw std::invalid_argument("tail_tol must be > 0");
    if (time_nodes < 2) throw std::invalid_argument("time_nodes must be >= 2");
}

LogGaussianLaw log_law(double t, const PhiPoint& from, const ModelParams& params) {
    if (!(t > 0.0)) throw DomainError("log_law needs t > 0");
    if (!(from.phi1 > 0.0 && from.phi2 > 0.0)) throw DomainError("log_law needs positive coordinates");
    const double m2t = params.mu * params.mu * t;
    return {std::log(from.phi1) - m2t, std::log(from.phi2) - m2t, 2.0 * m2t, m2t};
}

double density(double t, const PhiPoint& from, const PhiPoint& to, const ModelParams& params) {
    if (!(t > 0.0)) throw DomainError("density needs t > 0");
    if (!(from.phi1 > 0.0 && from.phi2 > 0.0 && to.phi1 > 0.0 && to.phi2 > 0.0)) {
        throw DomainError("density needs positive coordinates");
    }
    const double mt = params.mu * params.mu * t;
    const double r1 = std::log(to.phi1 / from.phi1);
    const double r2 = std::log(to.phi2 / from.phi2);
    const double d = r1 - r2;
    // Grouped so that swapping the coordinates gives the same bits.
    const double expo = mt + (r1 + r2) + (d * d + r1 * r2) / mt;
    return std::exp(-expo / 3.0) /
           (2.0 * std::numbers::pi * std::sqrt(3.0) * mt * (to.phi1 * to.phi2));
}

PhiPoint sample_phi(double t, const PhiPoint& from, const ModelParams& params, double z1, double z2) {
    const double mu = params.mu;
    const double st = std::sqrt(t);
    const double a = mu * std::numbers::sqrt2 * 0.5 * st;
    const double g1 = a * (std::numbers::sqrt3 * z1 + z2) - mu * mu * t;
    const double g2 = a * (std::numbers::sqrt3 * z1 - z2) - mu * mu * t;
    return {from.phi1 == 0.0 ? 0.0 : from.phi1 * std::exp(g1),
            from.phi2 == 0.0 ? 0.0 : from.phi2 * std::exp(g2)};
}

double expect_H_over_region(double t, const PhiPoint& from, const RegionTest& region,
                            const ModelParams& params, const QuadratureSpec& spec) {
    if (!(t > 0.0)) throw DomainError("expect_H_over_region needs t > 0");
    spec.validate();
    constexpr double kZ = 9.0;
    constexpr int kScan = 256;
    const Rule& gh = gauss_hermite_normal(spec.n_hermite);
    const double mu = params.mu;
    const double a = mu * std::numbers::sqrt2 * 0.5 * std::sqrt(t);
    const double s = a;  // coefficient of z2 in log Phi^1 (and minus that in log Phi^2)

    double total = 0.0;
    for (std::size_t k = 0; k < gh.nodes.size(); ++k) {
        const double base = a * std::numbers::sqrt3 * gh.nodes[k] - mu * mu * t;
        auto point = [&](double z2) {
            return PhiPoint{from.phi1 == 0.0 ? 0.0 : from.phi1 * std::exp(base + s * z2),
                            from.phi2 == 0.0 ? 0.0 : from.phi2 * std::exp(base - s * z2)};
        };
        // Exact integral of (1 + Phi1 + Phi2) against the N(0,1) density on [l, h].
        auto piece = [&](double l, double h) {
            const double e = std::exp(base + 0.5 * s * s);
            return (norm_cdf(h) - norm_cdf(l)) +
                   from.phi1 * e * (norm_cdf(h - s) - norm_cdf(l - s)) +
                   from.phi2 * e * (norm_cdf(h + s) - norm_cdf(l + s));
        };
        double line = 0.0;
        const double dz = 2.0 * kZ / kScan;
        double z_prev = -kZ;
        bool in_prev = region(point(z_prev));
        double start = in_prev ? -INFINITY : 0.0;
        for (int j = 1; j <= kScan; ++j) {
            const double z = -kZ + j * dz;
            const bool in = region(point(z));
            if (in != in_prev) {
                double lo = z_prev, hi = z;
                for (int it = 0; it < 50; ++it) {
                    const double mid = 0.5 * (lo + hi);
                    if (region(point(mid)) == in_prev) lo = mid; else hi = mid;
                }
                const double zc = 0.5 * (lo + hi);
                if (in) start = zc; else line += piece(start, zc);
            }
            z_prev = z;
            in_prev = in;
        }
        if (in_prev) line += piece(start, INFINITY);
        total += gh.weights[k] * line;
    }
    return total;
}

double generator_residual(const PhiPoint& phi, const ModelParams& params, double h) {
    if (!(phi.phi1 > 0.0 && phi.phi2 > 0.0)) throw DomainError("generator_residual needs phi in the open quadrant");
    if (!(h > 0.0) || h >= phi.phi1 || h >= phi.phi2) throw DomainError("generator_residual needs 0 < h < min(phi)");
    const double x = phi.phi1, y = phi.phi2;
    auto f = [&](double a, double b) { return mayer_check({a, b}, params); };
    const double f0 = f(x, y);
    const double fxx = (f(x + h, y) - 2.0 * f0 + f(x - h, y)) / (h * h);
    const double fyy = (f(x, y + h) - 2.0 * f0 + f(x, y - h)) / (h * h);
    const double fxy = (f(x + h, y + h) - f(x + h, y - h) - f(x - h, y + h) + f(x - h, y - h)) / (4.0 * h * h);
    const double lm = params.mu * params.mu * (x * x * fxx + x * y * fxy + y * y * fyy);
    return std::abs(lm - gain_hat(phi));
}

double integrate_time(const std::function<double(double)>& f, const ModelParams& params,
                      const QuadratureSpec& spec) {
    const Rule gl = gauss_legendre(spec.time_nodes);
    const double m2 = params.mu * params.mu;
    const double t1 = 0.05 / m2;
    const double horizon = spec.t_max / m2;

    // First panel, t = t1 u^2, u in (0, 1).
    double total = 0.0;
    for (std::size_t k = 0; k < gl.nodes.size(); ++k) {
        const double u = 0.5 * (gl.nodes[k] + 1.0);
        total += 0.5 * gl.weights[k] * 2.0 * t1 * u * f(t1 * u * u);
    }
    double a = t1;
    for (int p = 1; p < spec.time_panels && a < horizon; ++p) {
        const double b = std::min(2.0 * a, horizon);
        const double half = 0.5 * (b - a), mid = 0.5 * (b + a);
        double inc = 0.0;
        for (std::size_t k = 0; k < gl.nodes.size(); ++k) inc += gl.weights[k] * f(mid + half * gl.nodes[k]);
        inc *= half;
        total += inc;
        a = b;
        if (std::abs(inc) < spec.tail_tol) break;
    }
    return total;
}

}  // namespace driftdet

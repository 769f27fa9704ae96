#include "driftdet/continuation.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <numbers>
#include <vector>

#include "driftdet/quadrature.hpp"

namespace driftdet {

namespace {

constexpr double kZCut = 8.5;
constexpr double kMaxLog = 700.0;

double end_slope(std::span<const double> x, std::span<const double> y) {
    const std::size_t n = x.size();
    return (y[n - 1] - y[n - 2]) / (x[n - 1] - x[n - 2]);
}

// Composite Gauss-Legendre over z in [-kZCut, kZCut]. The base partition has kPanels equal
// panels; every kink of the inner probability (boundary knots, the diagonal crossing of b0)
// inside the range becomes an extra break point. Sub-panels get a node count proportional
// to their width, at least kMinNodes.
constexpr int kPanels = 4;
constexpr int kMinNodes = 3;

struct ZRule {
    int m = 0;
    std::vector<Rule> gl;  // gl[n] is the n-point rule, n in [kMinNodes, m]
};

const ZRule& zrule(int nodes) {
    static thread_local std::vector<std::unique_ptr<ZRule>> cache;
    const int m = std::max(kMinNodes, nodes / kPanels);
    for (const auto& r : cache) {
        if (r->m == m) return *r;
    }
    auto r = std::make_unique<ZRule>();
    r->m = m;
    r->gl.resize(std::size_t(m) + 1);
    for (int n = kMinNodes; n <= m; ++n) r->gl[std::size_t(n)] = gauss_legendre(n);
    cache.push_back(std::move(r));
    return *cache.back();
}

// Logs of the abscissae where the curves of a view have slope jumps. Knots where the jump
// in d log(curve) / d log(phi) is below kKinkTol are left to the smooth rule.
constexpr double kKinkTol = 1e-6;

struct Knots {
    std::vector<double> lower;  // b0 knots (only those below the crossing matter)
    std::vector<double> upper;  // b1 knots, including the start of the linear tail
    double log_cross = -1e300;

    explicit Knots(const BoundaryView& view) {
        const double cr = view.crossing();
        if (cr > 0.0) log_cross = std::log(cr);
        const std::size_t n0 = view.g0.size();
        for (std::size_t k = 1; k + 1 < n0; ++k) {
            const double x = view.g0[k];
            if (!(x < cr)) break;
            const double sl = (view.b0[k] - view.b0[k - 1]) / (x - view.g0[k - 1]);
            const double sr = (view.b0[k + 1] - view.b0[k]) / (view.g0[k + 1] - x);
            if (x * std::abs(sr - sl) > kKinkTol * view.b0ext(x)) lower.push_back(std::log(x));
        }
        // Past g0.back() b0ext continues along the last segment: no further knots.
        const std::size_t n1 = view.g1.size();
        for (std::size_t k = 1; k < n1; ++k) {
            const double x = view.g1[k];
            const double sl = (view.b1[k] - view.b1[k - 1]) / (x - view.g1[k - 1]);
            const double sr = k + 1 < n1 ? (view.b1[k + 1] - view.b1[k]) / (view.g1[k + 1] - x) : view.tail_slope;
            if (x * std::abs(sr - sl) > kKinkTol * view.b1[k]) upper.push_back(std::log(x));
        }
    }
};

struct Half {
    const BoundaryView& view;
    const ZRule& zr;
    const Knots& knots;

    // P(log Phi_i in [log L, log U)) with (log Phi_i, log Phi_j) bivariate normal,
    // means (ma, mb), variance v each, correlation 1/2, conditioning on log Phi_j.
    double operator()(double ma, double mb, double v) const {
        const double sv = std::sqrt(v);
        const double inv_cs = 1.0 / std::sqrt(0.75 * v);
        auto cond = [&](double z) {
            const double y = std::min(mb + sv * z, kMaxLog);
            const double ev = std::exp(y);
            const double up = view.upper(ev);
            const double lo = view.lower(ev);
            if (!(up > lo)) return 0.0;
            const double cm = ma + 0.5 * (y - mb);
            return norm_cdf((std::log(up) - cm) * inv_cs) - norm_cdf((std::log(lo) - cm) * inv_cs);
        };

        thread_local std::vector<double> cuts;
        cuts.clear();
        const double h = 2.0 * kZCut / kPanels;
        for (int p = 0; p <= kPanels; ++p) cuts.push_back(-kZCut + p * h);
        auto add = [&](double logx) {
            const double z = (logx - mb) / sv;
            if (z > -kZCut && z < kZCut) cuts.push_back(z);
        };
        add(knots.log_cross);
        for (double k : knots.lower) add(k);
        for (double k : knots.upper) add(k);
        std::sort(cuts.begin(), cuts.end());

        const int m = zr.m;
        double total = 0.0;
        for (std::size_t q = 0; q + 1 < cuts.size(); ++q) {
            const double a = cuts[q], b = cuts[q + 1];
            if (!(b > a)) continue;
            const int n = std::clamp(static_cast<int>(std::ceil(m * (b - a) / h)), kMinNodes, m);
            const Rule& r = zr.gl[std::size_t(n)];
            const double hl = 0.5 * (b - a), mid = 0.5 * (b + a);
            double acc = 0.0;
            for (int k = 0; k < n; ++k) {
                const double z = mid + hl * r.nodes[std::size_t(k)];
                acc += r.weights[std::size_t(k)] * std::exp(-0.5 * z * z) * cond(z);
            }
            total += hl * acc;
        }
        return total * 0.5 * std::numbers::inv_sqrtpi * std::numbers::sqrt2;
    }
};

double integrand_with(double t, const PhiPoint& from, const BoundaryView& view, const Knots& knots,
                      const ModelParams& params, int nodes_per_piece) {
    const double x1 = from.phi1, x2 = from.phi2;
    if (x1 == 0.0 && x2 == 0.0) return 0.0;
    const double m2t = params.mu * params.mu * t;
    const double v = 2.0 * m2t;

    if (x1 == 0.0 || x2 == 0.0) {
        // Zero is absorbing: a one-dimensional lognormal on the axis.
        const double x = x1 == 0.0 ? x2 : x1;
        const double ll = std::log(view.lower(0.0));
        const double lu = std::log(view.upper(0.0));
        if (!(lu > ll)) return 0.0;
        const double m = std::log(x) - m2t;
        const double sv = std::sqrt(v);
        const double p0 = norm_cdf((lu - m) / sv) - norm_cdf((ll - m) / sv);
        const double q1 = norm_cdf((lu - m - v) / sv) - norm_cdf((ll - m - v) / sv);
        return p0 + x * q1;
    }

    const Half half{view, zrule(nodes_per_piece), knots};
    const double m1 = std::log(x1) - m2t;
    const double m2 = std::log(x2) - m2t;
    // Under P0 and under the measures with density Phi^k_t / phi_k (mean shifts).
    const double p0 = half(m1, m2, v) + half(m2, m1, v);
    const double q1 = half(m1 + v, m2 + 0.5 * v, v) + half(m2 + 0.5 * v, m1 + v, v);
    const double q2 = half(m1 + 0.5 * v, m2 + v, v) + half(m2 + v, m1 + 0.5 * v, v);
    return p0 + x1 * q1 + x2 * q2;
}

}  // namespace

BoundaryView BoundaryView::of(const Boundaries& b) {
    BoundaryView v;
    v.g0 = b.grid0;
    v.b0 = b.b0;
    v.g1 = b.grid1;
    v.b1 = b.b1;
    v.gamma = b.gamma;
    v.tail_slope = b.asym_slope;
    return v;
}

double BoundaryView::b0ext(double v) const {
    const double gx = g0.back();
    const double base = v <= gx ? interp_linear(g0, b0, v) : b0.back() + end_slope(g0, b0) * (v - gx);
    return base + shift0;
}

double BoundaryView::b1ext(double v) const {
    const double xe = g1.back();
    const double base = v > xe ? b1.back() + tail_slope * (v - xe) : interp_linear(g1, b1, v);
    return base * (1.0 + shift1);
}

double BoundaryView::lower(double v) const { return std::max(v, b0ext(v)); }

double BoundaryView::upper(double v) const { return std::max(v, b1ext(v)); }

double BoundaryView::crossing() const {
    if (shift0 == 0.0) return gamma;
    // b0ext - v is piecewise linear with nodes on g0.
    double xp = 0.0, dp = b0ext(0.0);
    if (dp < 0.0) return 0.0;
    for (std::size_t k = 1; k < g0.size(); ++k) {
        const double x = g0[k];
        const double d = b0ext(x) - x;
        if (d < 0.0) return xp + dp * (x - xp) / (dp - d);
        xp = x;
        dp = d;
    }
    const double s = end_slope(g0, b0);
    if (s >= 1.0) return 1e300;
    return xp + dp / (1.0 - s);
}

double continuation_integrand(double t, const PhiPoint& from, const BoundaryView& view,
                              const ModelParams& params, int nodes_per_piece) {
    return integrand_with(t, from, view, Knots(view), params, nodes_per_piece);
}

double continuation_integral(const PhiPoint& from, const BoundaryView& view,
                             const ModelParams& params, const QuadratureSpec& spec) {
    const Knots knots(view);
    return integrate_time(
        [&](double t) { return integrand_with(t, from, view, knots, params, spec.n_hermite); }, params,
        spec);
}

}  // namespace driftdet

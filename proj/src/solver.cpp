#include "driftdet/solver.hpp"

#include <algorithm>
#include <boost/math/tools/toms748_solve.hpp>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <deque>
#include <Eigen/Dense>
#include <string>

#include "driftdet/closed_form.hpp"
#include "driftdet/continuation.hpp"
#include "driftdet/errors.hpp"
#include "driftdet/parallel.hpp"

namespace driftdet {

void SolverConfig::validate(const ModelParams& params) const {
    params.validate();
    quad.validate();
    if (n0 < 3 || n1 < 12) throw std::invalid_argument("grid sizes too small (n0 >= 3, n1 >= 12)");
    if (!(damping > 0.0 && damping <= 1.0)) throw std::invalid_argument("damping must lie in (0, 1]");
    if (!(tol_sup > 0.0)) throw std::invalid_argument("tol_sup must be > 0");
    if (!(stop_fraction > 0.0 && stop_fraction <= 1.0)) throw std::invalid_argument("stop_fraction must lie in (0, 1]");
    if (max_sweeps < 1) throw std::invalid_argument("max_sweeps must be >= 1");
    if (!(root_tol > 0.0)) throw std::invalid_argument("root_tol must be > 0");
    if (!(init_scale >= 1.0)) throw std::invalid_argument("init_scale must be >= 1");
    if (threads < 0) throw std::invalid_argument("threads must be >= 0");
    if (anderson_depth < 0) throw std::invalid_argument("anderson_depth must be >= 0");
    const double beta = solve_beta(params);
    if (phi_max > 0.0 && phi_max < 10.0 * beta * (1.0 - 1e-12)) {
        throw std::invalid_argument("phi_max must be >= 10 beta");
    }
}

double SolverConfig::resolved_phi_max(const ModelParams& params) const {
    return phi_max > 0.0 ? phi_max : 10.0 * solve_beta(params);
}

Boundaries initial_boundaries(const ModelParams& params, const SolverConfig& cfg) {
    cfg.validate(params);
    Boundaries b;
    b.params = params;
    b.beta = solve_beta(params);
    const double pmax = cfg.resolved_phi_max(params);
    b.grid1.push_back(0.0);
    const double lmin = std::log(1e-3), lmax = std::log(pmax);
    for (int k = 0; k < cfg.n1 - 1; ++k) {
        b.grid1.push_back(std::exp(lmin + (lmax - lmin) * k / (cfg.n1 - 2)));
    }
    b.grid1.back() = pmax;
    for (double g : b.grid1) b.b1.push_back(cfg.init_scale * b.beta * (1.0 + g));
    const double alpha = 1.0 / b.beta;
    b.gamma = 0.5 * (alpha + 1.0);
    for (int k = 0; k < cfg.n0; ++k) {
        const double g = b.gamma * k / (cfg.n0 - 1);
        b.grid0.push_back(g);
        b.b0.push_back(alpha + (b.gamma - alpha) * g / b.gamma);
    }
    b.grid0.back() = b.gamma;
    b.b0.back() = b.gamma;
    b.fit_asymptote();
    return b;
}

double occupation_integral(const PhiPoint& from, const Boundaries& b, const QuadratureSpec& quad) {
    return continuation_integral(from, BoundaryView::of(b), b.params, quad);
}

namespace {

struct RootResult {
    double s = 0.0;
    bool clamped = false;
};

template <class F>
RootResult bracket_and_solve(F&& G, double f0, int dir, double step, double lo, double hi, double tol) {
    auto finite = [](double v) {
        if (!std::isfinite(v)) throw NoBracket("boundary equation evaluated to a non-finite value");
        return v;
    };
    finite(f0);
    if (f0 == 0.0) return {0.0, false};
    double a = 0.0, fa = f0;
    double h = step;
    for (int it = 0; it < 80; ++it) {
        const double b = std::clamp(a + dir * h, lo, hi);
        if (b == a) return {a, true};
        const double fb = finite(G(b));
        if (fb == 0.0) return {b, false};
        if ((fb > 0.0) != (fa > 0.0)) {
            double x0 = a, x1 = b, f_0 = fa, f_1 = fb;
            if (x0 > x1) {
                std::swap(x0, x1);
                std::swap(f_0, f_1);
            }
            std::uintmax_t max_iter = 60;
            auto stop = [tol](double u, double v) { return std::abs(v - u) <= tol; };
            const auto r = boost::math::tools::toms748_solve(G, x0, x1, f_0, f_1, stop, max_iter);
            return {0.5 * (r.first + r.second), false};
        }
        if (b == lo || b == hi) return {b, true};
        // Secant estimate of the remaining distance, kept within [h, 8h].
        double next = 4.0 * h;
        if (fa != fb) {
            const double est = std::abs(fb * (b - a) / (fb - fa));
            if ((fa - fb) * (fa > 0.0 ? 1.0 : -1.0) > 0.0) next = std::clamp(1.5 * est, h, 8.0 * h);
        }
        a = b;
        fa = fb;
        h = next;
    }
    return {a, true};
}

struct PointResult {
    double value = 0.0;
    double shift = 0.0;
    bool clamped = false;
};

constexpr double kEdge = 1e-9;

PointResult solve_b1(std::size_t k, const Boundaries& b, const BoundaryView& base, const SolverConfig& cfg,
                     double hint) {
    const double x = b.grid1[k], y0 = b.b1[k], c = b.params.c;
    auto G = [&](double s) {
        BoundaryView v = base;
        v.shift1 = s;
        return c * (1.0 + x) - continuation_integral({x, y0 * (1.0 + s)}, v, b.params, cfg.quad);
    };
    const double lo = std::max(1.0, x) * (1.0 + kEdge) / y0 - 1.0;
    const double hi = 1.0;
    const double f0 = G(0.0);
    const int dir = f0 > 0.0 ? 1 : -1;  // G decreases in s
    const double step = std::max(std::abs(hint), 1e-3);
    const RootResult r = bracket_and_solve(G, f0, dir, step, lo, hi, cfg.root_tol / y0);
    return {y0 * (1.0 + cfg.damping * r.s), r.s, r.clamped};
}

PointResult solve_b0(std::size_t k, const Boundaries& b, const BoundaryView& base, const SolverConfig& cfg,
                     double hint) {
    const double x = b.grid0[k], y0 = b.b0[k], c = b.params.c;
    auto G = [&](double s) {
        BoundaryView v = base;
        v.shift0 = s;
        return c * (x + y0 + s) - continuation_integral({x, y0 + s}, v, b.params, cfg.quad);
    };
    const double lo = x * (1.0 + kEdge) + kEdge - y0;
    const double hi = 1.0 - kEdge - y0;
    const double f0 = G(0.0);
    const int dir = f0 < 0.0 ? 1 : -1;  // G increases in s
    const double step = std::max(std::abs(hint), 1e-3);
    const RootResult r = bracket_and_solve(G, f0, dir, step, lo, hi, cfg.root_tol);
    return {y0 + cfg.damping * r.s, r.s, r.clamped};
}

struct Task {
    BoundaryKind kind;
    std::size_t index;  // grid index; for B0 the last index is the gamma equation
};

// Concave majorant of (xs, ys), gamma at its diagonal crossing, resampled onto a uniform
// grid of n0 points on [0, gamma]. Returns the largest relative move made by the hull.
double rebuild_b0(const std::vector<double>& xs, const std::vector<double>& ys, std::size_t n0, Boundaries& out) {
    const std::vector<double> hull0 = hull_project(xs, ys, true);
    double moved = 0.0;
    for (std::size_t k = 0; k < xs.size(); ++k) moved = std::max(moved, std::abs(hull0[k] - ys[k]) / ys[k]);
    const double gam = std::clamp(diagonal_crossing(xs, hull0), 1e-6, 1.0 - kEdge);
    out.gamma = gam;
    out.grid0.resize(n0);
    out.b0.resize(n0);
    for (std::size_t k = 0; k < n0; ++k) {
        const double x = gam * double(k) / double(n0 - 1);
        out.grid0[k] = x;
        out.b0[k] = interp_linear(xs, hull0, x);
    }
    out.grid0.back() = gam;
    out.b0.back() = gam;
    return moved;
}

struct SweepOutcome {
    Boundaries next;
    double change = 0.0;
    double projection_change = 0.0;
    int clamped = 0;
};

SweepOutcome sweep(const Boundaries& b, const SolverConfig& cfg, std::vector<double>& hints) {
    const BoundaryView base = BoundaryView::of(b);
    std::vector<Task> tasks;
    for (std::size_t k = 0; k < b.grid1.size(); ++k) tasks.push_back({BoundaryKind::B1, k});
    for (std::size_t k = 0; k < b.grid0.size(); ++k) tasks.push_back({BoundaryKind::B0, k});
    std::vector<PointResult> out(tasks.size());
    const std::size_t last0 = b.grid0.size() - 1;

    auto run = [&](std::size_t i) {
        const Task& t = tasks[i];
        if (t.kind == BoundaryKind::B1) {
            out[i] = solve_b1(t.index, b, base, cfg, hints[i]);
        } else {
            out[i] = solve_b0(t.index, b, base, cfg, hints[i]);
        }
    };

    const auto n = static_cast<std::int64_t>(tasks.size());
    if (cfg.execution == Execution::Parallel) {
#ifdef _OPENMP
        const int nt = worker_count(cfg.threads);
#pragma omp parallel for schedule(dynamic, 1) num_threads(nt)
        for (std::int64_t i = 0; i < n; ++i) run(static_cast<std::size_t>(i));
#else
        for (std::int64_t i = 0; i < n; ++i) run(static_cast<std::size_t>(i));
#endif
    } else {
        for (std::int64_t i = 0; i < n; ++i) run(static_cast<std::size_t>(i));
    }

    SweepOutcome o;
    o.next = b;
    for (std::size_t i = 0; i < tasks.size(); ++i) {
        hints[i] = out[i].shift;
        o.clamped += out[i].clamped ? 1 : 0;
    }

    // b1: convex minorant.
    const std::size_t n1 = b.grid1.size();
    std::vector<double> raw1(n1);
    for (std::size_t k = 0; k < n1; ++k) raw1[k] = out[k].value;
    o.next.b1 = hull_project(b.grid1, raw1, false);
    for (std::size_t k = 0; k < n1; ++k) {
        o.projection_change = std::max(o.projection_change, std::abs(o.next.b1[k] - raw1[k]) / raw1[k]);
        o.change = std::max(o.change, std::abs(o.next.b1[k] - b.b1[k]) / (1.0 + b.grid1[k]));
    }

    // b0: concave majorant of the updates that stayed off the diagonal. An update clamped
    // at the diagonal means (x, x) continues, so such points only bound gamma from above.
    std::vector<double> xs, ys;
    for (std::size_t k = 0; k <= last0; ++k) {
        const PointResult& r = out[n1 + k];
        if (r.clamped && r.value <= b.grid0[k] * (1.0 + 1e-6) + 1e-6) continue;
        xs.push_back(b.grid0[k]);
        ys.push_back(r.value);
    }
    if (xs.size() < 2) {
        xs.assign(b.grid0.begin(), b.grid0.end());
        ys.assign(b.b0.begin(), b.b0.end());
    }
    o.projection_change = std::max(o.projection_change, rebuild_b0(xs, ys, b.grid0.size(), o.next));
    for (std::size_t k = 0; k < o.next.grid0.size(); ++k) {
        const double x = o.next.grid0[k];
        o.change = std::max(o.change, std::abs(o.next.b0[k] - base.b0ext(x)) / (1.0 + x));
    }
    o.change = std::max(o.change, std::abs(o.next.gamma - b.gamma));
    o.next.fit_asymptote();
    return o;
}

}  // namespace

double update_point(double x, BoundaryKind which, const Boundaries& b, const SolverConfig& cfg) {
    const BoundaryView base = BoundaryView::of(b);
    if (which == BoundaryKind::B1) {
        const auto it = std::find(b.grid1.begin(), b.grid1.end(), x);
        if (it == b.grid1.end()) throw std::invalid_argument("update_point: x is not a grid1 abscissa");
        return solve_b1(static_cast<std::size_t>(it - b.grid1.begin()), b, base, cfg, 0.0).value;
    }
    const auto it = std::find(b.grid0.begin(), b.grid0.end(), x);
    if (it == b.grid0.end()) throw std::invalid_argument("update_point: x is not a grid0 abscissa");
    return solve_b0(static_cast<std::size_t>(it - b.grid0.begin()), b, base, cfg, 0.0).value;
}

void fixed_point_residuals(const Boundaries& b, const SolverConfig& cfg, SolveReport& report) {
    const BoundaryView view = BoundaryView::of(b);
    const std::size_t n0 = b.grid0.size(), n1 = b.grid1.size();
    report.residual_b0.assign(n0, 0.0);
    report.residual_b1.assign(n1, 0.0);
    const double c = b.params.c;
    auto eval = [&](std::size_t i) {
        if (i < n1) {
            const double x = b.grid1[i];
            const double I = continuation_integral({x, b.b1[i]}, view, b.params, cfg.quad);
            report.residual_b1[i] = std::abs(1.0 + x - I / c) / (1.0 + x);
        } else {
            const std::size_t k = i - n1;
            const double x = b.grid0[k];
            const double I = continuation_integral({x, b.b0[k]}, view, b.params, cfg.quad);
            report.residual_b0[k] = std::abs(x + b.b0[k] - I / c) / (1.0 + x);
        }
    };
    const auto n = static_cast<std::int64_t>(n0 + n1);
    if (cfg.execution == Execution::Parallel) {
#ifdef _OPENMP
        const int nt = worker_count(cfg.threads);
#pragma omp parallel for schedule(dynamic, 1) num_threads(nt)
#endif
        for (std::int64_t i = 0; i < n; ++i) eval(static_cast<std::size_t>(i));
    } else {
        for (std::int64_t i = 0; i < n; ++i) eval(static_cast<std::size_t>(i));
    }
    report.max_residual = 0.0;
    for (double r : report.residual_b0) report.max_residual = std::max(report.max_residual, r);
    for (double r : report.residual_b1) report.max_residual = std::max(report.max_residual, r);
}

namespace {

// State for extrapolation: b1 values, b0 at the normalized abscissae k / (n0 - 1) * gamma
// (without the end point), then gamma.
Eigen::VectorXd pack(const Boundaries& b) {
    const std::size_t n1 = b.b1.size(), n0 = b.b0.size();
    Eigen::VectorXd u(static_cast<Eigen::Index>(n1 + n0));
    for (std::size_t k = 0; k < n1; ++k) u[Eigen::Index(k)] = b.b1[k];
    for (std::size_t k = 0; k + 1 < n0; ++k) u[Eigen::Index(n1 + k)] = b.b0[k];
    u[Eigen::Index(n1 + n0 - 1)] = b.gamma;
    return u;
}

Eigen::VectorXd state_weights(const Boundaries& b) {
    const std::size_t n1 = b.b1.size(), n0 = b.b0.size();
    Eigen::VectorXd w(static_cast<Eigen::Index>(n1 + n0));
    for (std::size_t k = 0; k < n1; ++k) w[Eigen::Index(k)] = 1.0 / (1.0 + b.grid1[k]);
    for (std::size_t k = 0; k < n0; ++k) w[Eigen::Index(n1 + k)] = 1.0 / (1.0 + double(k) / double(n0 - 1));
    return w;
}

// Inverse of pack with the shape and ordering constraints re-imposed.
Boundaries unpack(const Eigen::VectorXd& u, const Boundaries& like) {
    Boundaries b = like;
    const std::size_t n1 = b.b1.size(), n0 = b.b0.size();
    std::vector<double> raw1(n1);
    for (std::size_t k = 0; k < n1; ++k) {
        raw1[k] = std::max(u[Eigen::Index(k)], std::max(1.0, b.grid1[k]) * (1.0 + kEdge));
    }
    b.b1 = hull_project(b.grid1, raw1, false);
    const double gam = std::clamp(u[Eigen::Index(n1 + n0 - 1)], 1e-6, 1.0 - kEdge);
    std::vector<double> xs(n0), ys(n0);
    for (std::size_t k = 0; k < n0; ++k) {
        xs[k] = gam * double(k) / double(n0 - 1);
        ys[k] = k + 1 < n0 ? std::clamp(u[Eigen::Index(n1 + k)], xs[k] + kEdge, 1.0 - kEdge) : gam;
    }
    rebuild_b0(xs, ys, n0, b);
    b.fit_asymptote();
    return b;
}

}  // namespace

Boundaries picard_solve_from(Boundaries b, const SolverConfig& cfg, SolveReport* report) {
    cfg.validate(b.params);
    b.validate();
    const auto t0 = std::chrono::steady_clock::now();
    SolveReport rep;
    std::vector<double> hints(b.grid1.size() + b.grid0.size(), 0.0);
    const Eigen::VectorXd w = state_weights(b);
    std::deque<Eigen::VectorXd> g_hist, f_hist;
    double best = INFINITY;
    b.converged = false;
    const double stop_at = cfg.stop_fraction * cfg.tol_sup;
    for (int sweep_no = 0; sweep_no < cfg.max_sweeps; ++sweep_no) {
        SweepOutcome o = sweep(b, cfg, hints);
        o.next.iteration_log.push_back(o.change);
        rep.sweeps = sweep_no + 1;
        rep.final_change = o.change;
        rep.projection_change = o.projection_change;
        rep.clamped_points = o.clamped;
        const bool last = sweep_no + 1 == cfg.max_sweeps;
        if (o.change <= stop_at || cfg.anderson_depth == 0 || (last && o.change <= cfg.tol_sup)) {
            b = std::move(o.next);
            if (o.change <= stop_at || (last && o.change <= cfg.tol_sup)) {
                b.converged = true;
                break;
            }
            continue;
        }
        // Anderson extrapolation over the last few Picard images.
        const Eigen::VectorXd g = pack(o.next);
        const Eigen::VectorXd f = (g - pack(b)).cwiseProduct(w);
        const double fn = f.lpNorm<Eigen::Infinity>();
        if (fn > 4.0 * best) {
            g_hist.clear();
            f_hist.clear();
        }
        best = std::min(best, fn);
        g_hist.push_back(g);
        f_hist.push_back(f);
        while (static_cast<int>(g_hist.size()) > cfg.anderson_depth + 1) {
            g_hist.pop_front();
            f_hist.pop_front();
        }
        const auto m = static_cast<Eigen::Index>(g_hist.size()) - 1;
        if (m == 0) {
            b = std::move(o.next);
            continue;
        }
        Eigen::MatrixXd dF(f.size(), m), dG(g.size(), m);
        for (Eigen::Index j = 0; j < m; ++j) {
            dF.col(j) = f_hist[std::size_t(j + 1)] - f_hist[std::size_t(j)];
            dG.col(j) = g_hist[std::size_t(j + 1)] - g_hist[std::size_t(j)];
        }
        const Eigen::VectorXd theta = dF.colPivHouseholderQr().solve(f);
        const Eigen::VectorXd u = g - dG * theta;
        std::vector<double> log = o.next.iteration_log;
        b = unpack(u, o.next);
        b.iteration_log = std::move(log);
    }
    fixed_point_residuals(b, cfg, rep);
    rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (report) *report = rep;
    if (!b.converged) throw NonConvergence(b, rep);
    return b;
}

Boundaries picard_solve(const ModelParams& params, const SolverConfig& cfg, SolveReport* report) {
    return picard_solve_from(initial_boundaries(params, cfg), cfg, report);
}

}  // namespace driftdet

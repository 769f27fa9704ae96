#include "driftdet/boundaries.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace driftdet {

const char* region_name(Region r) noexcept {
    switch (r) {
        case Region::CONTINUE: return "CONTINUE";
        case Region::STOP_D0: return "STOP_D0";
        case Region::STOP_D1: return "STOP_D1";
        case Region::STOP_D2: return "STOP_D2";
    }
    return "?";
}

double interp_linear(std::span<const double> x, std::span<const double> y, double v) {
    const std::size_t n = x.size();
    if (n == 1) return y[0];
    std::size_t k;
    if (v <= x[1]) {
        k = 0;
    } else if (v >= x[n - 2]) {
        k = n - 2;
    } else {
        k = static_cast<std::size_t>(std::upper_bound(x.begin(), x.end(), v) - x.begin()) - 1;
    }
    const double w = (v - x[k]) / (x[k + 1] - x[k]);
    return y[k] + w * (y[k + 1] - y[k]);
}

double Boundaries::b0_at(double v) const { return interp_linear(grid0, b0, v); }

double Boundaries::b1_at(double v) const {
    const double xe = grid1.back();
    if (v > xe) return b1.back() + asym_slope * (v - xe);
    return interp_linear(grid1, b1, v);
}

void Boundaries::fit_asymptote(std::size_t n) {
    n = std::min(n, grid1.size());
    const std::size_t s = grid1.size() - n;
    double mx = 0, my = 0;
    for (std::size_t k = s; k < grid1.size(); ++k) { mx += grid1[k]; my += b1[k]; }
    mx /= double(n);
    my /= double(n);
    double sxx = 0, sxy = 0;
    for (std::size_t k = s; k < grid1.size(); ++k) {
        sxx += (grid1[k] - mx) * (grid1[k] - mx);
        sxy += (grid1[k] - mx) * (b1[k] - my);
    }
    tail_slope_fit = sxx > 0 ? sxy / sxx : beta;
    asym_slope = beta;
    asym_intercept = my - beta * mx;
}

void Boundaries::validate() const {
    if (grid0.size() < 2 || grid0.size() != b0.size()) throw std::invalid_argument("b0 grid/value size mismatch");
    if (grid1.size() < 2 || grid1.size() != b1.size()) throw std::invalid_argument("b1 grid/value size mismatch");
    for (std::size_t k = 1; k < grid0.size(); ++k) {
        if (!(grid0[k] > grid0[k - 1])) throw std::invalid_argument("grid0 must be increasing");
    }
    for (std::size_t k = 1; k < grid1.size(); ++k) {
        if (!(grid1[k] > grid1[k - 1])) throw std::invalid_argument("grid1 must be increasing");
    }
    if (grid0.front() != 0.0 || grid1.front() != 0.0) throw std::invalid_argument("grids must start at 0");
    if (!(gamma > 0.0)) throw std::invalid_argument("gamma must be positive");
    params.validate();
}

Region classify(const PhiPoint& phi, const Boundaries& b) {
    const bool first_larger = phi.phi1 >= phi.phi2;
    const double hi = first_larger ? phi.phi1 : phi.phi2;
    const double lo = first_larger ? phi.phi2 : phi.phi1;
    if (lo <= b.gamma && hi <= b.b0_at(lo)) return Region::STOP_D0;
    if (hi >= b.b1_at(lo)) return first_larger ? Region::STOP_D2 : Region::STOP_D1;
    return Region::CONTINUE;
}

std::vector<double> hull_project(std::span<const double> x, std::span<const double> y, bool upper) {
    const std::size_t n = x.size();
    std::vector<std::size_t> h;
    h.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        while (h.size() >= 2) {
            const std::size_t i1 = h[h.size() - 2], i2 = h.back();
            const double cross = (x[i2] - x[i1]) * (y[i] - y[i1]) - (y[i2] - y[i1]) * (x[i] - x[i1]);
            // Lower hull keeps left turns (cross > 0); upper hull keeps right turns.
            const bool keep = upper ? cross < 0.0 : cross > 0.0;
            if (keep) break;
            h.pop_back();
        }
        h.push_back(i);
    }
    std::vector<double> out(n);
    std::size_t seg = 0;
    for (std::size_t i = 0; i < n; ++i) {
        while (seg + 1 < h.size() && x[h[seg + 1]] < x[i]) ++seg;
        if (seg + 1 >= h.size() || x[h[seg]] == x[i]) {
            out[i] = y[h[seg]];
        } else {
            const std::size_t a = h[seg], c = h[seg + 1];
            out[i] = y[a] + (y[c] - y[a]) * (x[i] - x[a]) / (x[c] - x[a]);
        }
    }
    return out;
}

double diagonal_crossing(std::span<const double> x, std::span<const double> y) {
    const std::size_t n = x.size();
    for (std::size_t i = 0; i + 1 < n; ++i) {
        const double d0 = y[i] - x[i], d1 = y[i + 1] - x[i + 1];
        if (d0 >= 0.0 && d1 < 0.0) return x[i] + d0 * (x[i + 1] - x[i]) / (d0 - d1);
    }
    const double slope = (y[n - 1] - y[n - 2]) / (x[n - 1] - x[n - 2]);
    if (y[n - 1] - x[n - 1] >= 0.0) {
        if (slope >= 1.0) throw std::runtime_error("b0 does not reach the diagonal");
        return x[n - 1] + (y[n - 1] - x[n - 1]) / (1.0 - slope);
    }
    // Entire sequence below the diagonal: extend backwards from the first point.
    const double s0 = (y[1] - y[0]) / (x[1] - x[0]);
    return x[0] + (y[0] - x[0]) / (1.0 - s0);
}

SymmetryReport symmetry_residuals(const Boundaries& b) {
    SymmetryReport r;
    r.slope = std::abs(b.tail_slope_fit - b.beta) / b.beta;
    r.correspondence = std::abs(1.0 - b.b0.front() * b.tail_slope_fit);
    for (std::size_t k = 1; k < b.grid0.size(); ++k) {
        const double phi = b.grid0[k];
        const double v0 = b.b0[k];
        const double psi = v0 / phi;
        r.correspondence = std::max(r.correspondence, std::abs(1.0 - v0 * b.b1_at(psi) / psi));
    }
    return r;
}

}  // namespace driftdet

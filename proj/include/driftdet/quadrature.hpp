#pragma once

#include <cmath>
#include <vector>

namespace driftdet {

struct Rule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

/// Gauss-Legendre rule on [-1, 1] (Golub-Welsch). Cached per n.
Rule gauss_legendre(int n);

/// Gauss-Hermite rule for the standard normal weight: sum w_k f(x_k) ~ E f(Z).
Rule gauss_hermite_normal(int n);

/// Standard normal CDF, accurate in both tails.
inline double norm_cdf(double x) { return 0.5 * std::erfc(-x * 0.70710678118654752440); }

}  // namespace driftdet

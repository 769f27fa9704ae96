#include "driftdet/quadrature.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

namespace driftdet {

namespace {

// Nodes are eigenvalues of the Jacobi matrix; weights mu0 * v_0^2.
Rule golub_welsch(int n, double mu0, double (*offdiag2)(int)) {
    Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
    for (int k = 1; k < n; ++k) {
        const double b = std::sqrt(offdiag2(k));
        J(k, k - 1) = b;
        J(k - 1, k) = b;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
    Rule r;
    r.nodes.resize(n);
    r.weights.resize(n);
    for (int k = 0; k < n; ++k) {
        r.nodes[k] = es.eigenvalues()(k);
        const double v = es.eigenvectors()(0, k);
        r.weights[k] = mu0 * v * v;
    }
    // Symmetrize: both weight functions are even.
    for (int k = 0; k < n / 2; ++k) {
        const int j = n - 1 - k;
        const double x = 0.5 * (r.nodes[j] - r.nodes[k]);
        const double w = 0.5 * (r.weights[j] + r.weights[k]);
        r.nodes[k] = -x;
        r.nodes[j] = x;
        r.weights[k] = w;
        r.weights[j] = w;
    }
    if (n % 2 == 1) r.nodes[n / 2] = 0.0;
    return r;
}

double legendre_b2(int k) { return double(k) * k / (4.0 * k * k - 1.0); }
double hermite_b2(int k) { return double(k); }

template <class Make>
const Rule& cached(std::map<int, Rule>& cache, std::mutex& m, int n, Make make) {
    std::lock_guard<std::mutex> lock(m);
    auto it = cache.find(n);
    if (it == cache.end()) it = cache.emplace(n, make(n)).first;
    return it->second;
}

}  // namespace

Rule gauss_legendre(int n) {
    if (n < 1) throw std::invalid_argument("gauss_legendre needs n >= 1");
    static std::map<int, Rule> cache;
    static std::mutex m;
    return cached(cache, m, n, [](int k) { return golub_welsch(k, 2.0, legendre_b2); });
}

Rule gauss_hermite_normal(int n) {
    if (n < 1) throw std::invalid_argument("gauss_hermite_normal needs n >= 1");
    static std::map<int, Rule> cache;
    static std::mutex m;
    return cached(cache, m, n, [](int k) { return golub_welsch(k, 1.0, hermite_b2); });
}

}  // namespace driftdet

#pragma once

#include "driftdet/solver.hpp"

namespace fixture {

inline driftdet::SolverConfig coarse_config() {
    driftdet::SolverConfig c;
    c.n0 = 9;
    c.n1 = 13;
    c.quad.n_hermite = 16;
    c.quad.time_nodes = 8;
    c.tol_sup = 5e-3;
    return c;
}

// One coarse solve at mu = 1, c = 2, shared by every test in the binary.
inline const driftdet::Boundaries& coarse_boundaries() {
    static const driftdet::Boundaries b = driftdet::picard_solve({1.0, 2.0}, coarse_config());
    return b;
}

}  // namespace fixture

#pragma once

#ifdef _OPENMP
#include <omp.h>
#endif

namespace driftdet {

/// Worker count for a parallel region: the request if positive, else the OpenMP default.
inline int worker_count(int requested) {
    if (requested > 0) return requested;
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

}  // namespace driftdet

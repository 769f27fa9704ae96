#pragma once

#include <stdexcept>
#include <string>

namespace driftdet {

/// Argument outside the domain of a formula (non-positive coordinate, t <= 0, ...).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Prior with pi0 == 0: the ratio chart (pi1/pi0, pi2/pi0) is undefined.
class DegeneratePrior : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Scalar root search found no sign change on its interval.
class NoBracket : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Boundaries were computed for a different (mu, c) than the caller's.
class BoundaryMismatch : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

}  // namespace driftdet

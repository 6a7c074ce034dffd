#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace transonic {

// Admissible-set violations of the thermodynamic closures: the subsonic
// density root disappears, or a pressure leaves the supersonic interval.
class sonic_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// State outside the physical domain of a closed-form relation
// (negative radicand, stagnation limit, tan pole).
class admissibility_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Linear-solver failure: singular factorization or excessive residual.
class singular_operator_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Inconsistent or malformed problem data (boundary traces, config files).
class data_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Grid/CFL or control-parameter violations detected before iterating.
class configuration_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A fixed-point loop exhausted its sweep budget.  Carries the residual
// history so callers can report it.
class convergence_error : public std::runtime_error {
public:
    convergence_error(const std::string& what, std::vector<double> history)
        : std::runtime_error(what), residual_history(std::move(history)) {}
    std::vector<double> residual_history;
};

}  // namespace transonic

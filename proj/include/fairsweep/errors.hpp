#pragma once

#include <stdexcept>
#include <string>

namespace fairsweep {

// Base class for all library errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Input violates a stated structural invariant (bad density, bad weights, ...).
class ValidationError : public Error {
public:
    using Error::Error;
};

// Malformed external file. Carries 1-based row/column of the offending token
// when known (0 = unknown).
class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t row = 0, std::size_t col = 0)
        : Error(what), row(row), col(col) {}
    std::size_t row;
    std::size_t col;
};

// Query outside the supported domain of a function or distribution.
class DomainError : public Error {
public:
    using Error::Error;
};

// Supplied profile cannot be a conditional-probability curve.
class InconsistentInput : public Error {
public:
    using Error::Error;
};

// Criterion has no single-group measure (utility-only or compound criteria).
class UnsupportedCriterion : public Error {
public:
    using Error::Error;
};

// A qualification profile sits at an exact 0/1 plateau where a bias transform
// is undefined even after clamping.
class DegenerateProfile : public Error {
public:
    using Error::Error;
};

// No threshold pair satisfies the constraint at the requested tolerance.
// min_feasible_epsilon is the smallest tolerance found to admit a solution.
class InfeasibleConstraint : public Error {
public:
    InfeasibleConstraint(const std::string& what, double min_feasible_epsilon)
        : Error(what), min_feasible_epsilon(min_feasible_epsilon) {}
    double min_feasible_epsilon;
};

// A closed-form evaluation point does not exist (boundary or degenerate solve).
class SolverUnavailable : public Error {
public:
    using Error::Error;
};

// Too few records to estimate a required histogram cell.
class InsufficientData : public Error {
public:
    using Error::Error;
};

// Filesystem-level failure while reading or writing.
class IoError : public Error {
public:
    using Error::Error;
};

} // namespace fairsweep

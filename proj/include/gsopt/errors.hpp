#pragma once

#include <stdexcept>
#include <string>

namespace gsopt {

// Bad argument values (nonpositive stepsize, malformed coefficients, ...).
class ParameterError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Evaluation outside an objective's open domain. Carries the distance from
// the offending point to the domain boundary so callers can report how far
// out the step landed.
class DomainError : public std::domain_error {
public:
    DomainError(const std::string& what, double boundary_distance)
        : std::domain_error(what), boundary_distance_(boundary_distance) {}
    double boundary_distance() const noexcept { return boundary_distance_; }

private:
    double boundary_distance_;
};

// The implicit gradient-level inequality has no finite solution (the
// smoothness bound grows at least linearly in the unknown).
class NoFiniteGError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A smoothness profile violates its own contract (non-monotone samples,
// nonpositive values where positivity is required).
class ProfileError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A tuner was asked to handle an objective outside its assumptions
// (nonconvex input to a convex-only rule, missing strong convexity).
class MethodMismatchError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Tuning needs a constant the objective does not carry (f*, x*); the tuner
// refuses instead of estimating it.
class TuningError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A rate fit was requested over an unusable window (too few points,
// non-positive gaps).
class WindowError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A diagnostics report was asked for data the trajectory does not contain.
class ReportError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Malformed or inconsistent run configuration.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A numeric search exhausted its budget without bracketing its target.
class SearchError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace gsopt

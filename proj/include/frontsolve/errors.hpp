#pragma once

#include <stdexcept>
#include <string>

namespace frontsolve {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// A problem parameter that must be strictly positive is not.
class NonPositiveParameter : public Error {
public:
    explicit NonPositiveParameter(const std::string& field)
        : Error("non-positive parameter: " + field), field_(field) {}
    const std::string& field() const { return field_; }

private:
    std::string field_;
};

/// Initial data violates a compatibility condition (positivity, endpoint
/// zero, or zero slope at the left end).
class IncompatibleInitialData : public Error {
public:
    IncompatibleInitialData(const std::string& which, long node = -1)
        : Error("incompatible initial data: " + which +
                (node >= 0 ? " at node " + std::to_string(node) : "")),
          which_(which), node_(node) {}
    const std::string& which() const { return which_; }
    long node() const { return node_; }

private:
    std::string which_;
    long node_;
};

class UnknownFamily : public Error {
public:
    explicit UnknownFamily(const std::string& name)
        : Error("unknown initial-data family: " + name) {}
};

/// Point lies outside the admissible domain of a transform.
class OutOfDomain : public Error {
public:
    explicit OutOfDomain(const std::string& msg) : Error("out of domain: " + msg) {}
};

class GridTooCoarse : public Error {
public:
    explicit GridTooCoarse(const std::string& msg) : Error("grid too coarse: " + msg) {}
};

class ConfigError : public Error {
public:
    explicit ConfigError(const std::string& msg) : Error("config error: " + msg) {}
};

/// A time step produced a value too negative to attribute to round-off;
/// the caller should retry with a smaller dt.
class StepRejected : public Error {
public:
    StepRejected(double value, long node, const std::string& component)
        : Error("step rejected: " + component + "[" + std::to_string(node) +
                "] = " + std::to_string(value)),
          value_(value), node_(node) {}
    double value() const { return value_; }
    long node() const { return node_; }

private:
    double value_;
    long node_;
};

/// NaN or infinity appeared in the state.
class NonFiniteValue : public Error {
public:
    explicit NonFiniteValue(const std::string& where)
        : Error("non-finite value in " + where) {}
};

/// The stability-limited step fell below dt_min.
class StepCollapse : public Error {
public:
    StepCollapse(double dt, double dt_min)
        : Error("time step collapsed: dt = " + std::to_string(dt) +
                " < dt_min = " + std::to_string(dt_min)),
          dt_(dt) {}
    double dt() const { return dt_; }

private:
    double dt_;
};

/// Operation invoked outside its exponent regime (e.g. the small-data
/// certificate with pq <= 1).
class WrongRegime : public Error {
public:
    explicit WrongRegime(const std::string& msg) : Error("wrong regime: " + msg) {}
};

class InvalidBound : public Error {
public:
    explicit InvalidBound(const std::string& msg) : Error("invalid bound: " + msg) {}
};

class TooShort : public Error {
public:
    explicit TooShort(const std::string& msg) : Error("trajectory too short: " + msg) {}
};

/// A paired-run precondition (parameter equality, data ordering, shift or
/// front-position ordering) does not hold.
class HypothesisViolation : public Error {
public:
    explicit HypothesisViolation(const std::string& which)
        : Error("hypothesis violation: " + which), which_(which) {}
    const std::string& which() const { return which_; }

private:
    std::string which_;
};

/// Component-wise ordering between two runs failed beyond the
/// discretization-noise band.
class OrderingViolation : public Error {
public:
    OrderingViolation(double time, long node, const std::string& component,
                      double magnitude)
        : Error("ordering violation: " + component + " at t = " +
                std::to_string(time) + ", node " + std::to_string(node) +
                ", magnitude " + std::to_string(magnitude)),
          time_(time), node_(node), component_(component), magnitude_(magnitude) {}
    double time() const { return time_; }
    long node() const { return node_; }
    const std::string& component() const { return component_; }
    double magnitude() const { return magnitude_; }

private:
    double time_;
    long node_;
    std::string component_;
    double magnitude_;
};

/// A shift schedule was exhausted before consecutive levels met the
/// requested tolerance.
class NoConvergence : public Error {
public:
    NoConvergence(double last_diff, double tol)
        : Error("cascade did not converge: last consecutive difference " +
                std::to_string(last_diff) + " >= tol " + std::to_string(tol)),
          last_diff_(last_diff) {}
    double last_diff() const { return last_diff_; }

private:
    double last_diff_;
};

} // namespace frontsolve

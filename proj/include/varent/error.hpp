#pragma once

#include <stdexcept>
#include <string>

namespace varent {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// An argument lies outside the domain where the quantity is defined
/// (a probability outside [0,1], a truncation time with G(t) = 0, ...).
class DomainError : public Error {
public:
    using Error::Error;
};

/// Distribution parameters are NaN, infinite or out of range.
class InvalidDistribution : public Error {
public:
    using Error::Error;
};

/// Sample data is unusable (empty, non-positive where positivity is required, ...).
class DataError : public Error {
public:
    using Error::Error;
};

/// A weight function or distortion function failed its grid validation.
class ConstructionError : public Error {
public:
    using Error::Error;
};

/// Numerical results contradict an invariant beyond the tolerated round-off
/// (for example a variance below the -1e-9 floor).
class ConsistencyError : public Error {
public:
    using Error::Error;
};

/// Adaptive quadrature ran out of its subdivision budget. The best estimate
/// reached so far is carried along so callers can decide what to do with it.
class QuadratureError : public Error {
public:
    QuadratureError(const std::string& what, double best, double abs_error)
        : Error(what), best_(best), abs_error_(abs_error) {}

    double best() const noexcept { return best_; }
    double abs_error() const noexcept { return abs_error_; }

private:
    double best_;
    double abs_error_;
};

}  // namespace varent

#ifndef UGRAV_ERRORS_HPP
#define UGRAV_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace ugrav {

/// Base class for all library errors.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Input fails a validation invariant (bad data, bad parameters).
struct ValidationError : Error {
    using Error::Error;
};

struct ZeroMarginal : ValidationError {
    using ValidationError::ValidationError;
};
struct NonPositiveShock : ValidationError {
    using ValidationError::ValidationError;
};
struct BadElasticity : ValidationError {
    using ValidationError::ValidationError;
};
struct ConflictingShifters : ValidationError {
    using ValidationError::ValidationError;
};
struct XiWithoutUniversal : ValidationError {
    using ValidationError::ValidationError;
};
struct NonSquare : ValidationError {
    using ValidationError::ValidationError;
};
struct MissingValue : ValidationError {
    using ValidationError::ValidationError;
};
struct Overflow : ValidationError {
    using ValidationError::ValidationError;
};
struct DimensionMismatch : ValidationError {
    using ValidationError::ValidationError;
};
struct DegenerateDeficit : ValidationError {
    using ValidationError::ValidationError;
};
struct NoInternationalTrade : ValidationError {
    using ValidationError::ValidationError;
};
struct UndefinedForExplicitC : ValidationError {
    using ValidationError::ValidationError;
};

/// Numeric failure during iteration (overflow, non-positive intermediate).
struct NonFinite : Error {
    using Error::Error;
};

/// Fixed point did not converge within max_iter.
struct NotConverged : Error {
    long n_iter;
    double crit;
    NotConverged(const std::string& msg, long iters, double criterion)
        : Error(msg), n_iter(iters), crit(criterion) {}
};

/// File could not be read or written.
struct IoError : Error {
    using Error::Error;
};

}  // namespace ugrav

#endif  // UGRAV_ERRORS_HPP

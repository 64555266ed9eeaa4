#pragma once

#include <stdexcept>
#include <string>

namespace couette {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
public:
    using Error::Error;
};

/// Grid too small for the requested operator order.
class SizingError : public Error {
public:
    using Error::Error;
};

/// Two grid functions (or a function and an operator) live on different grids.
class GridMismatch : public Error {
public:
    using Error::Error;
};

/// A potential that should vanish at y = 0 and y = 1 does not.
class EndpointViolation : public Error {
public:
    using Error::Error;
};

/// The bordered collocation matrix is numerically singular: s is (close to)
/// an eigenvalue of the discrete operator.
class SingularMatrix : public Error {
public:
    SingularMatrix(const std::string& what, double condition_estimate)
        : Error(what), condition_estimate_(condition_estimate) {}
    [[nodiscard]] double condition_estimate() const noexcept { return condition_estimate_; }

private:
    double condition_estimate_;
};

/// The scaled residual of a solve exceeds the acceptance tolerance.
class MeshTooCoarse : public Error {
public:
    MeshTooCoarse(const std::string& what, double residual)
        : Error(what), residual_(residual) {}
    [[nodiscard]] double residual() const noexcept { return residual_; }

private:
    double residual_;
};

/// Gram matrix of an energy form failed its Cholesky factorization.
class IndefiniteGram : public Error {
public:
    using Error::Error;
};

class EigenSolverFailure : public Error {
public:
    using Error::Error;
};

/// A parameter sweep exceeded its allowed fraction of failed points.
class SweepFailed : public Error {
public:
    using Error::Error;
};

}  // namespace couette

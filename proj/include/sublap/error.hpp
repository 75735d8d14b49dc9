#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace sublap {

/// Base class for all errors raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A documented precondition on an argument does not hold.
class PreconditionError : public Error {
public:
    using Error::Error;
};

/// Two objects that must live on the same grid/chart do not.
class GridMismatchError : public Error {
public:
    using Error::Error;
};

/// An iterative method ran out of budget. Carries whatever it achieved.
class ConvergenceError : public Error {
public:
    ConvergenceError(const std::string& what, std::vector<double> achieved)
        : Error(what), achieved_(std::move(achieved)) {}

    const std::vector<double>& achieved() const noexcept { return achieved_; }

private:
    std::vector<double> achieved_;
};

} // namespace sublap

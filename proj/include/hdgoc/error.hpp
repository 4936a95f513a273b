#pragma once

#include <stdexcept>
#include <string>

namespace hdgoc {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
public:
    using Error::Error;
};

class UnsupportedDegree : public Error {
public:
    using Error::Error;
};

/// A per-element interior block could not be factored.
class LocalSingularity : public Error {
public:
    LocalSingularity(std::size_t element, double rcond)
        : Error("local system of element " + std::to_string(element) +
                " is numerically singular (rcond = " + std::to_string(rcond) + ")"),
          element_(element)
    {
    }

    [[nodiscard]] std::size_t element() const noexcept { return element_; }

private:
    std::size_t element_;
};

/// Stabilization functions violate the positivity condition on some element boundary.
class StabilizationInvalid : public Error {
public:
    using Error::Error;
};

class SolverFailure : public Error {
public:
    SolverFailure(const std::string& what, double residual)
        : Error(what + " (relative residual = " + std::to_string(residual) + ")"), residual_(residual)
    {
    }

    [[nodiscard]] double residual() const noexcept { return residual_; }

private:
    double residual_;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

} // namespace hdgoc

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace rwl {

/// Input text could not be parsed. Carries the 1-based line number when known.
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string &what, std::size_t line)
        : std::runtime_error(what), line_(line) {}
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

/// A value violates a documented invariant or precondition.
class ValidationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// An iterative solver ran out of iterations. The best estimate is kept so
/// callers can decide whether it is good enough.
class ConvergenceError : public std::runtime_error {
public:
    ConvergenceError(const std::string &what, double estimate, double residual)
        : std::runtime_error(what), estimate_(estimate), residual_(residual) {}
    double estimate() const noexcept { return estimate_; }
    double residual() const noexcept { return residual_; }

private:
    double estimate_;
    double residual_;
};

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace rwl

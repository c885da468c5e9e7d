#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace sepbound {

/// An argument lies outside the domain of the operation.
class DomainError : public std::domain_error {
  public:
    using std::domain_error::domain_error;
};

/// Adaptive quadrature exhausted its evaluation budget. Carries the best
/// estimate reached and its error bound.
class ConvergenceError : public std::runtime_error {
  public:
    ConvergenceError(const std::string& what, double estimate, double error_bound)
        : std::runtime_error(what), estimate_(estimate), error_bound_(error_bound) {}

    double estimate() const noexcept { return estimate_; }
    double error_bound() const noexcept { return error_bound_; }

  private:
    double estimate_;
    double error_bound_;
};

/// Malformed input text; `line()` is 1-based.
class ParseError : public std::runtime_error {
  public:
    ParseError(std::size_t line, const std::string& what)
        : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}

    std::size_t line() const noexcept { return line_; }

  private:
    std::size_t line_;
};

/// Well-formed input that violates a dataset invariant.
class ValidationError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// A file could not be opened, read or written.
class IoError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

namespace detail {

inline void require(bool condition, const char* message) {
    if (!condition) throw DomainError(message);
}

}  // namespace detail
}  // namespace sepbound

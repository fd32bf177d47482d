#ifndef NESS_ERRORS_HPP
#define NESS_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace ness {

/// Invalid or inconsistent run configuration (bad keys, out-of-range values).
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Mathematical precondition violated (argument outside the operation's domain).
class DomainError : public std::domain_error {
 public:
  explicit DomainError(const std::string& msg) : std::domain_error(msg) {}
};

/// Two grid-sampled functions live on different grids.
class ShapeError : public std::runtime_error {
 public:
  explicit ShapeError(const std::string& msg) : std::runtime_error(msg) {}
};

/// The GTW metric is undefined for the given pair (moment mismatch).
class MetricDomainError : public std::runtime_error {
 public:
  explicit MetricDomainError(const std::string& msg) : std::runtime_error(msg) {}
};

/// A transform was requested outside its controlled-truncation regime.
class TruncationError : public std::runtime_error {
 public:
  explicit TruncationError(const std::string& msg) : std::runtime_error(msg) {}
};

/// An observed contraction ratio exceeded the certified factor; indicates
/// an implementation bug, since the factor is a theorem.
class ContractionViolation : public std::runtime_error {
 public:
  explicit ContractionViolation(const std::string& msg) : std::runtime_error(msg) {}
};

/// Numerical quality gate failed (ill-conditioned fit, invariant breach).
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace ness

#endif

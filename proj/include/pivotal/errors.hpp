#ifndef PIVOTAL_ERRORS_HPP
#define PIVOTAL_ERRORS_HPP

#include <stdexcept>
#include <string>
#include <utility>

namespace pivotal {

/// Bad user input: a parameter, flag or config value violates its constraint.
/// `field()` names the offending field, e.g. "sd" or "noise1.sd".
class ValidationError : public std::invalid_argument {
 public:
  ValidationError(std::string field, const std::string& message)
      : std::invalid_argument(field + ": " + message), field_(std::move(field)), message_(message) {}

  const std::string& field() const noexcept { return field_; }
  const std::string& message() const noexcept { return message_; }

 private:
  std::string field_;
  std::string message_;
};

/// Argument outside the mathematical domain of an operation (p or gamma not in (0,1)).
class DomainError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

/// All-zero, non-finite or delta-like values where a proper density is required.
class DegenerateDensityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Two densities whose product has no mass.
class NoOverlapError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Grid steps that cannot be made commensurable.
class GridMismatchError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Filesystem failure while reading or writing an artifact file.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace pivotal

#endif  // PIVOTAL_ERRORS_HPP

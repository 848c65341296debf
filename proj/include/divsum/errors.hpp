#ifndef DIVSUM_ERRORS_HPP
#define DIVSUM_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace divsum {

/// Invalid argument or violated precondition (x = 0, too few samples, ...).
class DomainError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// A table or workspace would exceed the configured memory cap.
class SizingError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// A lookup needed a table entry beyond the table's limit.
class CoverageError : public std::out_of_range {
public:
  using std::out_of_range::out_of_range;
};

/// An exact accumulator would have left its representable range.
class OverflowError : public std::overflow_error {
public:
  using std::overflow_error::overflow_error;
};

/// Least-squares basis is rank deficient or badly conditioned.
class ConditioningError : public std::runtime_error {
public:
  ConditioningError(const std::string& what, double condition)
      : std::runtime_error(what), condition_(condition) {}

  double condition() const noexcept { return condition_; }

private:
  double condition_;
};

}  // namespace divsum

#endif  // DIVSUM_ERRORS_HPP

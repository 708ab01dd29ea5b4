#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace svcmisc {

// Malformed or invalid input data (bad CSV cells, range violations, spacing).
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A file could not be opened, read or written.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// The integrator produced a non-finite value.
class NumericError : public std::runtime_error {
 public:
  NumericError(double time, std::size_t state_index, const std::string& what)
      : std::runtime_error(what), time_(time), state_index_(state_index) {}

  double time() const noexcept { return time_; }
  std::size_t state_index() const noexcept { return state_index_; }

 private:
  double time_;
  std::size_t state_index_;
};

// Observed MISC is zero everywhere; such a participant cannot be fitted.
class ExclusionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// No optimizer start met its convergence criterion.
class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace svcmisc

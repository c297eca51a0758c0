#pragma once

#include <stdexcept>
#include <string>

namespace daa {

// Parameter outside the model's domain (alpha >= 0.5, i > n, ...).
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// An infinite series did not reach its tail bound within the term cap.
class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A lag search could not certify positivity past the end of the trajectory.
// Rebuild the trajectory with more epochs.
class HorizonError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Root finding was asked for a crossover that does not exist.
class NoSignChangeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A simulated cycle ran past the runaway guard.
class SimIntegrityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

inline void require(bool condition, const std::string& message) {
  if (!condition) throw DomainError(message);
}

}  // namespace detail
}  // namespace daa

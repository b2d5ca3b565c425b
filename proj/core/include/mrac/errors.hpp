#pragma once

#include <stdexcept>
#include <string>

namespace mrac {

// Base of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A caller broke a documented precondition (bad degrees, zero kp, ...).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// An algorithmic guarantee was violated at runtime (e.g. 1 + sigma*rho == 0).
class ContractViolation : public Error {
 public:
  using Error::Error;
};

// Linear system could not be solved reliably.
class SingularSystem : public Error {
 public:
  SingularSystem(const std::string& what, double condition)
      : Error(what), condition_(condition) {}
  double condition() const noexcept { return condition_; }

 private:
  double condition_;
};

// Integration produced a NaN/Inf; carries the simulation time of the failure.
class NonFiniteState : public Error {
 public:
  NonFiniteState(const std::string& what, double t) : Error(what), time_(t) {}
  double time() const noexcept { return time_; }

 private:
  double time_;
};

}  // namespace mrac

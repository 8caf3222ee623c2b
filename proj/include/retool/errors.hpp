#pragma once

#include <stdexcept>
#include <string>

namespace retool {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Argument outside the region where a quantity is defined.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A potential was evaluated before it passed validation.
class NotValidated : public Error {
 public:
  NotValidated() : Error("potential used before validation") {}
};

/// A potential fails one of the four generic-potential conditions.
class AxiomViolation : public Error {
 public:
  AxiomViolation(int item, const std::string& what)
      : Error("axiom violation (item " + std::to_string(item) + "): " + what), item_(item) {}
  int item() const noexcept { return item_; }

 private:
  int item_;
};

class ConvergenceError : public Error {
 public:
  using Error::Error;
};

class KindMismatch : public Error {
 public:
  using Error::Error;
};

class NotApplicable : public Error {
 public:
  using Error::Error;
};

class NegativeDiscriminant : public Error {
 public:
  using Error::Error;
};

/// Closed-form and numeric classifiers disagree.
class Inconsistent : public Error {
 public:
  using Error::Error;
};

class ContinuationGap : public Error {
 public:
  using Error::Error;
};

/// REM quantities requested at a linear (z = 0) relative equilibrium.
class LinearREError : public Error {
 public:
  LinearREError() : Error("REM stability requires an isosceles RE (z != 0); use the slice method") {}
};

class SingularB : public Error {
 public:
  SingularB() : Error("B is singular (M1 r_e^2 == M2 s_e^2)") {}
};

class SingularInertia : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace retool

#pragma once

#include <stdexcept>
#include <string>

namespace contactlax {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed expression tree or unparsable input.
class StructuralError : public Error {
 public:
  using Error::Error;
};

/// A substitution or evaluation met a jet variable it has no value for.
class CoverageError : public Error {
 public:
  using Error::Error;
};

/// Division by an expression that vanishes (symbolically or at a sample point).
class PoleError : public Error {
 public:
  using Error::Error;
};

class ParameterError : public Error {
 public:
  using Error::Error;
};

/// The compatibility derivation produced something other than a rational
/// function of p times psi_z.
class DerivationError : public Error {
 public:
  using Error::Error;
};

class TransformDegenerateError : public Error {
 public:
  using Error::Error;
};

class CompileError : public Error {
 public:
  using Error::Error;
};

class IncompatibleGaugeError : public Error {
 public:
  using Error::Error;
};

class TheoremVerificationError : public Error {
 public:
  using Error::Error;
};

/// Controlled abort of a time integration (pole proximity, NaN, overflow).
class NumericalAbort : public Error {
 public:
  NumericalAbort(std::string what, long step) : Error(std::move(what)), step_(step) {}
  long step() const { return step_; }

 private:
  long step_;
};

}  // namespace contactlax

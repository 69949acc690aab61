#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace spvqe {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Mismatched sizes, malformed words, or inputs violating an operation's shape contract.
class StructuralError : public Error {
 public:
  using Error::Error;
};

/// Dense representation requested above the configured qubit limit.
class CapacityError : public Error {
 public:
  using Error::Error;
};

/// Expectation value requested for an operator that is not Hermitian.
class NonHermitianError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

/// A qubit removed by the parity reduction carries an X or Y letter.
class SymmetryViolationError : public Error {
 public:
  using Error::Error;
};

/// No eigenstate satisfies the constraints within tolerance.
class InfeasibleSectorError : public Error {
 public:
  using Error::Error;
};

/// The ground state already satisfies the constraint, so the penalty bound is undefined.
class DegenerateConstraintError : public Error {
 public:
  using Error::Error;
};

/// Non-finite objective or gradient. Carries the last iterate that evaluated cleanly.
class OptimizationError : public Error {
 public:
  OptimizationError(const std::string& what, std::vector<double> last_good)
      : Error(what), last_good_(std::move(last_good)) {}
  const std::vector<double>& last_good() const noexcept { return last_good_; }

 private:
  std::vector<double> last_good_;
};

}  // namespace spvqe

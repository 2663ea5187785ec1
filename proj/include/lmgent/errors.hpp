#pragma once

#include <stdexcept>
#include <string>

namespace lmgent {

/// Invalid arguments: out-of-range parameters, bad sector labels, negative T.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Root finding, eigensolver or quadrature failure.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A reduced density that breaks the permutation/parity structure it must have.
class SymmetryViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// MF+RPA partition function diverges (vanishing RPA energy or zeta -> 1).
class DivergenceError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// Static path + RPA is not defined below its breakdown temperature.
class BreakdownError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

}  // namespace lmgent

#ifndef CFLAB_ERRORS_HPP
#define CFLAB_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace cflab {

/// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// ---- field arithmetic ----

class NotPrime : public Error {
 public:
  explicit NotPrime(const std::string& w) : Error(w) {}
};

class DivisionByZero : public Error {
 public:
  explicit DivisionByZero(const std::string& w) : Error(w) {}
};

/// Mixing elements or containers over different moduli.
class ModulusMismatch : public Error {
 public:
  explicit ModulusMismatch(const std::string& w) : Error(w) {}
};

class DimensionMismatch : public Error {
 public:
  explicit DimensionMismatch(const std::string& w) : Error(w) {}
};

// ---- probability ----

class InvalidPmf : public Error {
 public:
  explicit InvalidPmf(const std::string& w) : Error(w) {}
};

class UnknownAxis : public Error {
 public:
  explicit UnknownAxis(const std::string& w) : Error(w) {}
};

class OverlappingAxes : public Error {
 public:
  explicit OverlappingAxes(const std::string& w) : Error(w) {}
};

/// KL divergence p||r with p(x) > 0 where r(x) = 0.
class AbsoluteContinuityViolation : public Error {
 public:
  explicit AbsoluteContinuityViolation(const std::string& w) : Error(w) {}
};

class EmptySequence : public Error {
 public:
  explicit EmptySequence(const std::string& w) : Error(w) {}
};

class LengthMismatch : public Error {
 public:
  explicit LengthMismatch(const std::string& w) : Error(w) {}
};

// ---- channel / region specs ----

class InvalidSpec : public Error {
 public:
  explicit InvalidSpec(const std::string& w) : Error(w) {}
};

class AlphabetMismatch : public Error {
 public:
  explicit AlphabetMismatch(const std::string& w) : Error(w) {}
};

class ZeroCoefficientVector : public Error {
 public:
  explicit ZeroCoefficientVector(const std::string& w) : Error(w) {}
};

class NotNaturalCombination : public Error {
 public:
  explicit NotNaturalCombination(const std::string& w) : Error(w) {}
};

class InvalidAlpha : public Error {
 public:
  explicit InvalidAlpha(const std::string& w) : Error(w) {}
};

/// Outer-bound evaluation requires p(y|x1,x2) to factor through the combination.
class MarkovPrecondFailed : public Error {
 public:
  explicit MarkovPrecondFailed(const std::string& w) : Error(w) {}
};

// ---- simulation ----

/// Exhaustive enumeration would exceed the configured tuple budget.
class BudgetExceeded : public Error {
 public:
  explicit BudgetExceeded(const std::string& w) : Error(w) {}
};

class WrongMessageLength : public Error {
 public:
  explicit WrongMessageLength(const std::string& w) : Error(w) {}
};

class InstanceTooLarge : public Error {
 public:
  explicit InstanceTooLarge(const std::string& w) : Error(w) {}
};

// ---- cli ----

class UsageError : public Error {
 public:
  explicit UsageError(const std::string& w) : Error(w) {}
};

class SchemaError : public Error {
 public:
  explicit SchemaError(const std::string& w) : Error(w) {}
};

class IoFailure : public Error {
 public:
  explicit IoFailure(const std::string& w) : Error(w) {}
};

}  // namespace cflab

#endif  // CFLAB_ERRORS_HPP

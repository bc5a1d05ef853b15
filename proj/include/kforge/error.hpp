#pragma once

#include <stdexcept>
#include <string>

namespace kforge {

/// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A documented precondition was violated by the caller (bad parameters,
/// root of unity outside W_S, non-Kolyvagin prime, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Arithmetic that cannot be carried out (division by zero, element not in
/// a cyclic span, Hensel obstruction, ...).
class ArithmeticError : public Error {
 public:
  using Error::Error;
};

/// A computation exceeded its configured budget (precision, retries, size).
class BudgetError : public Error {
 public:
  using Error::Error;
};

/// An identity that holds for every correct implementation failed. Seeing
/// one of these means there is a bug.
class InternalInconsistency : public Error {
 public:
  explicit InternalInconsistency(const std::string& what)
      : Error("internal inconsistency: " + what) {}
};

}  // namespace kforge

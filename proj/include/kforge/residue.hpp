#pragma once

#include "kforge/ntheory.hpp"
#include "kforge/poly.hpp"

namespace kforge {

/// An integer modulo ell^k, kept in [0, ell^k).
class ResidueInt {
 public:
  ResidueInt(Integer value, u64 ell, unsigned k);

  const Integer& value() const { return value_; }
  const Integer& modulus() const { return modulus_; }
  u64 ell() const { return ell_; }
  unsigned precision() const { return k_; }

  /// Image in Z/ell^j for j <= precision().
  ResidueInt reduce(unsigned j) const;

  friend bool operator==(const ResidueInt& a, const ResidueInt& b) {
    return a.ell_ == b.ell_ && a.k_ == b.k_ && a.value_ == b.value_;
  }

 private:
  Integer value_;
  Integer modulus_;
  u64 ell_;
  unsigned k_;
};

/// Evaluates an integer polynomial at x modulo mod, result in [0, mod).
Integer eval_mod(const ZPoly& f, const Integer& x, const Integer& mod);

/// Lifts a simple root c of f modulo ell to a root modulo ell^k by Newton
/// iteration. Throws ArithmeticError("Hensel obstruction") when f'(c) = 0 mod ell
/// and DomainError when c is not a root mod ell.
ResidueInt hensel_lift_root(const ZPoly& f, u64 ell, u64 c, unsigned k);

}  // namespace kforge

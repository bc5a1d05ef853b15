#pragma once

// Finite fields F_{ell^f} = F_ell[x]/(g) with g monic irreducible. These
// realize residue fields of cyclotomic integers at primes above ell.

#include <string>
#include <vector>

#include "kforge/ntheory.hpp"

namespace kforge {

class FiniteField {
 public:
  /// Element: coefficient vector of length degree(), entries in [0, ell).
  using Elt = std::vector<u64>;

  /// modulus is monic, lowest degree first (its last entry must be 1).
  /// Throws DomainError unless ell is prime and modulus is irreducible.
  FiniteField(u64 ell, std::vector<u64> modulus);

  static FiniteField prime_field(u64 ell);
  /// F_{ell^f} with the lexicographically first monic irreducible modulus.
  static FiniteField with_degree(u64 ell, unsigned f);

  u64 characteristic() const { return ell_; }
  unsigned degree() const { return f_; }
  const std::vector<u64>& modulus() const { return modulus_; }
  /// ell^f - 1
  const Integer& group_order() const { return group_order_; }

  Elt zero() const { return Elt(f_, 0); }
  Elt one() const { return from_int(1); }
  Elt from_int(i64 a) const;
  /// The residue class of x, i.e. the root of the modulus.
  Elt generator_x() const;

  bool is_zero(const Elt& a) const;
  Elt add(const Elt& a, const Elt& b) const;
  Elt sub(const Elt& a, const Elt& b) const;
  Elt neg(const Elt& a) const;
  Elt mul(const Elt& a, const Elt& b) const;
  Elt scale(const Elt& a, u64 s) const;
  Elt pow(const Elt& a, const Integer& e) const;
  Elt pow(const Elt& a, u64 e) const { return pow(a, Integer(static_cast<unsigned long>(e))); }
  /// Throws ArithmeticError on zero.
  Elt inv(const Elt& a) const;

  /// Deterministic search for an element of exact multiplicative order n
  /// (n must divide ell^f - 1).
  Elt element_of_order(u64 n) const;

  std::string to_string(const Elt& a) const;

 private:
  u64 ell_;
  unsigned f_;
  std::vector<u64> modulus_;
  Integer group_order_;
};

/// Smallest e >= 1 with g^e = 1. Throws ArithmeticError when g = 0.
Integer ff_element_order(const FiniteField& field, const FiniteField::Elt& g);

/// Smallest e >= 0 with g^e = w. Brute-force scan for order(g) < 10^4,
/// baby-step/giant-step above. Throws ArithmeticError("not in cyclic span").
Integer ff_discrete_log(const FiniteField& field, const FiniteField::Elt& g, const FiniteField::Elt& w);

/// Distinct prime factors of a (moderately sized) positive integer.
std::vector<Integer> prime_divisors_big(const Integer& n);

}  // namespace kforge

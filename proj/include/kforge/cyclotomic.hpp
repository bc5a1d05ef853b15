#pragma once

// Exact arithmetic in Q(zeta_m), its Galois action, tower embeddings, norms
// and the real-subfield test. Elements of the maximal real subfield are kept
// inside Q(zeta_m) as conjugation-invariant vectors.

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "kforge/ntheory.hpp"
#include "kforge/poly.hpp"

namespace kforge {

/// Phi_m as an integer polynomial. Throws DomainError for m = 0.
ZPoly cyclotomic_polynomial(u64 m);

/// Immutable per-conductor tables: Phi_m and the enumeration of (Z/m)^x.
class CycloField {
 public:
  CycloField(u64 m, ZPoly cyclo_poly, std::vector<u64> unit_group);

  u64 conductor() const { return m_; }
  u64 degree() const { return phi_; }
  const ZPoly& cyclo_poly() const { return cyclo_poly_; }
  const std::vector<u64>& unit_group() const { return unit_group_; }

  /// Reduces an integer coefficient vector of any length modulo Phi_m in
  /// place; the result has exactly degree() entries.
  void reduce(std::vector<Integer>& v) const;

 private:
  u64 m_;
  u64 phi_;
  ZPoly cyclo_poly_;
  std::vector<u64> unit_group_;
  // Nonzero lower-order terms (index, coefficient) of the monic Phi_m.
  std::vector<std::pair<std::size_t, long>> tail_;
};

using FieldPtr = std::shared_ptr<const CycloField>;

/// Raw tables for one conductor, as exchanged with a persistent store.
struct FieldTables {
  u64 m = 0;
  std::vector<long> cyclo_coeffs;
  std::vector<u64> unit_group;
};

/// Optional persistent backing for the per-conductor field cache.
class FieldTableStore {
 public:
  virtual ~FieldTableStore() = default;
  virtual std::optional<FieldTables> load(u64 m) = 0;
  virtual void save(const FieldTables& tables) = 0;
};

/// Installs (or clears, with nullptr) the store consulted on cache misses.
void set_field_table_store(std::shared_ptr<FieldTableStore> store);

/// Tables for Q(zeta_m); cached in memory, safe to call concurrently.
FieldPtr cyclotomic_field(u64 m);

/// Validates raw tables against the definition of Phi_m; returns the field
/// or std::nullopt when the tables are inconsistent.
std::optional<FieldPtr> field_from_tables(const FieldTables& tables);
FieldTables tables_of(const CycloField& field);

/// An element of Q(zeta_m) in the power basis 1, zeta, ..., zeta^(phi-1),
/// stored as an integer vector over a common positive denominator.
class CycloElt {
 public:
  /// Zero of Q.
  CycloElt();
  /// The zero element.
  explicit CycloElt(FieldPtr field);
  /// num / den, reduced mod Phi_m; num may have any length.
  CycloElt(FieldPtr field, std::vector<Integer> num, Integer den = 1);

  static CycloElt from_rational(FieldPtr field, const Rational& r);
  static CycloElt from_rationals(FieldPtr field, const std::vector<Rational>& coeffs);
  /// zeta_m^e for any integer e.
  static CycloElt root_of_unity(FieldPtr field, i64 e);

  const FieldPtr& field() const { return field_; }
  u64 conductor() const { return field_->conductor(); }
  const std::vector<Integer>& numerators() const { return num_; }
  const Integer& denominator() const { return den_; }
  Rational coeff(std::size_t i) const;
  std::vector<Rational> coeffs() const;

  bool is_zero() const;
  bool is_one() const;
  bool is_rational() const;
  /// Throws DomainError unless is_rational().
  Rational rational_value() const;

  CycloElt& operator+=(const CycloElt& o);
  CycloElt& operator-=(const CycloElt& o);
  CycloElt& operator*=(const CycloElt& o);
  CycloElt& operator*=(const Rational& r);

  friend CycloElt operator+(CycloElt a, const CycloElt& b) { return a += b; }
  friend CycloElt operator-(CycloElt a, const CycloElt& b) { return a -= b; }
  friend CycloElt operator*(const CycloElt& a, const CycloElt& b);
  friend CycloElt operator*(CycloElt a, const Rational& r) { return a *= r; }
  friend CycloElt operator-(CycloElt a);
  friend bool operator==(const CycloElt& a, const CycloElt& b);

  /// Canonical decimal rendering of the coefficient vector ("a" or "a/b").
  std::vector<std::string> to_strings() const;
  std::string to_string() const;

 private:
  void normalize();
  void require_same_field(const CycloElt& o) const;

  FieldPtr field_;
  std::vector<Integer> num_;
  Integer den_;
};

/// An automorphism sigma_a: zeta_m -> zeta_m^a of Q(zeta_m).
class GaloisElt {
 public:
  /// a is taken modulo m (negative values allowed); throws DomainError when gcd(a, m) != 1.
  GaloisElt(FieldPtr field, i64 a);

  const FieldPtr& field() const { return field_; }
  u64 residue() const { return a_; }
  GaloisElt compose(const GaloisElt& o) const;
  GaloisElt inverse() const;

  friend bool operator==(const GaloisElt& x, const GaloisElt& y) {
    return x.field_->conductor() == y.field_->conductor() && x.a_ == y.a_;
  }

 private:
  FieldPtr field_;
  u64 a_;
};

/// zeta_order^exponent; the actual multiplicative order is order / gcd(order, exponent).
struct RootOfUnity {
  u64 order = 1;
  u64 exponent = 0;

  RootOfUnity() = default;
  RootOfUnity(u64 order, i64 exponent);
  u64 exact_order() const;
  bool is_one() const { return exact_order() == 1; }
  /// The same root written as a power of zeta_ambient (order must divide ambient).
  u64 exponent_in(u64 ambient) const;
};

CycloElt elt_inverse(const CycloElt& x);
/// x^e for any integer e (negative powers invert).
CycloElt pow(const CycloElt& x, i64 e);

/// 1 / (1 - zeta_m^e) from the closed form -(1/d) sum_k k w^k, w = zeta_m^e of order d.
/// Throws ArithmeticError when zeta_m^e = 1.
CycloElt inverse_one_minus_root(const FieldPtr& field, i64 e);

CycloElt galois_apply(const GaloisElt& s, const CycloElt& x);
/// sigma_a for a residue a coprime to the conductor of x.
CycloElt galois_apply(u64 a, const CycloElt& x);

/// The image of x under Q(zeta_m) -> Q(zeta_target), zeta_m -> zeta_target^(target/m).
CycloElt embed_up(const CycloElt& x, u64 target);

/// Inverse of embed_up: the y in Q(zeta_target) with embed_up(y) = x. Throws
/// DomainError when target does not divide the conductor or x is not in the subfield.
CycloElt descend(const CycloElt& x, u64 target);

/// Product of sigma(x) over a subgroup H (closure verified).
CycloElt relative_norm(const CycloElt& x, const std::vector<GaloisElt>& subgroup);
/// The subgroup {sigma_a : a = 1 mod sub} of Gal(Q(zeta_m)/Q), which fixes Q(zeta_sub).
std::vector<GaloisElt> subfield_fixer(const FieldPtr& field, u64 sub);

Rational absolute_norm(const CycloElt& x);
bool is_in_real_subfield(const CycloElt& x);
QPoly minimal_polynomial(const CycloElt& x);

}  // namespace kforge

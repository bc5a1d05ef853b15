#pragma once

// The cyclotomic-unit Euler system phi_Omega, its two derived systems, and
// exact verifiers for the axioms and norm relations it satisfies.

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "kforge/cyclotomic.hpp"

namespace kforge {

/// Pairs (a_j, n_j) with a_j != 0 and sum n_j = 0.
class OmegaSpec {
 public:
  /// Throws DomainError on a zero a_j or a nonzero exponent sum.
  explicit OmegaSpec(std::vector<std::pair<i64, i64>> pairs);

  const std::vector<std::pair<i64, i64>>& pairs() const { return pairs_; }
  /// 2 together with every prime dividing some a_j, increasing.
  const std::vector<u64>& excluded_primes() const { return excluded_; }
  /// prod a_j^n_j, the value at eta = 1.
  Rational value_at_one() const;

 private:
  std::vector<std::pair<i64, i64>> pairs_;
  std::vector<u64> excluded_;
};

class EulerSystem {
 public:
  /// twist: xi = zeta_h^e with gcd(e, h) = 1, h coprime to the base S.
  explicit EulerSystem(OmegaSpec base, std::optional<i64> compose_n = std::nullopt,
                       std::optional<RootOfUnity> twist = std::nullopt);

  /// "1:1,2:-1" optionally followed by ",compose=n" and/or ",twist=h:e".
  /// Throws DomainError naming the offending character position.
  static EulerSystem parse(const std::string& text);
  std::string to_string() const;

  const OmegaSpec& base() const { return base_; }
  const std::optional<i64>& compose_n() const { return compose_; }
  const std::optional<RootOfUnity>& twist() const { return twist_; }
  /// Order h of the twisting root, 1 when untwisted.
  u64 twist_order() const { return twist_ ? twist_->order : 1; }
  /// Base S enlarged by the primes of n and of h.
  const std::vector<u64>& excluded_primes() const { return excluded_; }
  /// True when a root of unity of exact order N lies in W_S.
  bool admits_order(u64 N) const;

 private:
  OmegaSpec base_;
  std::optional<i64> compose_;
  std::optional<RootOfUnity> twist_;
  std::vector<u64> excluded_;
};

/// phi(zeta_L^e) computed in Q(zeta_L). When twisted, h must divide L.
/// Throws DomainError("eta outside W_S") and ArithmeticError on a zero factor.
CycloElt phi_in(const EulerSystem& E, u64 L, i64 e);

/// phi(eta) as an element of Q(zeta_{eta.order}).
CycloElt phi_eval(const EulerSystem& E, const RootOfUnity& eta);

struct Witness {
  std::string label;
  u64 conductor = 1;
  std::vector<std::string> coeffs;
};
Witness make_witness(std::string label, const CycloElt& x);

struct AxiomReport {
  std::string check;
  std::vector<std::pair<std::string, std::string>> params;
  bool pass = false;
  std::vector<Witness> witness;
  std::vector<std::pair<std::string, std::string>> details;
};

/// phi(eta^a) = sigma_a(phi(eta)) and phi(eta^-1) = phi(eta).
AxiomReport check_equivariance(const EulerSystem& E, const RootOfUnity& eta, i64 a);
/// prod over zeta in mu_q of phi(zeta eta) = phi(eta^q).
AxiomReport check_distribution(const EulerSystem& E, const RootOfUnity& eta, u64 q);
/// phi(zeta eta) = phi(eta) modulo every prime above q, tested in a residue field
/// F_{q^f} at one prime against all Galois conjugates.
AxiomReport check_congruence(const EulerSystem& E, const RootOfUnity& eta, u64 q);
/// N_{H_mq/H_m} phi(zeta_q zeta_m) = phi(zeta_m)^(Frob_q - 1).
AxiomReport check_frobenius_norm(const EulerSystem& E, u64 m, u64 q);
/// N_{F_{n+1}/F_n} phi(zeta_{n+1}) = phi(zeta_n) with zeta_k = zeta_{p^{k+1}}.
AxiomReport check_tower_norm(const EulerSystem& E, u64 p, unsigned n);
/// phi(eta) has an integral minimal polynomial and absolute norm +-1.
AxiomReport check_unit(const EulerSystem& E, const RootOfUnity& eta);

/// u = sign * zeta^root_exponent * prod xi_a^e_a over the real cyclotomic units
/// xi_a = zeta^((1-a)/2) (1 - zeta^a) / (1 - zeta) of Q(zeta_N)^+, N = p^(n+1).
struct Decomposition {
  u64 conductor = 1;
  std::vector<u64> generators;
  std::vector<Integer> exponents;
  int sign = 1;
  u64 root_exponent = 0;
  unsigned precision_bits = 0;
  bool verified = false;
};

/// The generator indices a used by decompose for N = p^(n+1).
std::vector<u64> cyclotomic_unit_indices(u64 p, unsigned n);
CycloElt cyclotomic_unit(const FieldPtr& field, u64 a);

/// Throws DomainError unless u is a real unit of Q(zeta_{p^(n+1)}) and
/// BudgetError("decomposition not found") past 2048 bits.
Decomposition decompose_over_cyclotomic_units(const CycloElt& u, u64 p, unsigned n);

}  // namespace kforge

#pragma once

// Degree-1 primes above a completely split q: valuations, the projections
// [x]_q, the discrete-log map lambda_q and the factorization check for
// Kolyvagin classes.

#include <string>
#include <vector>

#include "kforge/cyclotomic.hpp"
#include "kforge/kolyvagin.hpp"
#include "kforge/residue.hpp"

namespace kforge {

/// Roots of Phi_m mod q (q = 1 mod m) grouped into the primes of Q(zeta_m)^+.
/// Root j is g^j for the least g of order m; the prime of Q(zeta_m) at root r
/// is (q, zeta - r), and sigma_a carries it to the prime at r^(1/a).
struct SplitPrimeData {
  u64 q = 0;
  u64 m = 0;
  u64 g = 0;
  std::vector<u64> root_exponents;  // j with gcd(j, m) = 1, increasing
  std::vector<u64> roots;           // g^j mod q
  std::vector<ResidueInt> lifts;    // roots lifted to q^precision
  /// Primes of F: (index of root g^j, index of root g^-j), j <= (m-1)/2.
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  u64 t = 0;      // least primitive root mod q
  u64 gamma = 0;  // t^-1 mod q

  std::size_t root_index(u64 j) const;
  /// Index in pairs of the F-prime containing root g^j.
  std::size_t pair_of_exponent(u64 j) const;
};

/// Throws DomainError("prime does not split completely") unless q = 1 mod m.
SplitPrimeData split_prime_data(u64 q, u64 m, unsigned precision = 8);

/// v at the prime of Q(zeta_m) with the given root index. Precision doubles
/// from 8 up to 512; throws BudgetError("valuation undecidable at budget").
i64 valuation(const CycloElt& x, std::size_t root_index, const SplitPrimeData& data);

struct IdealVector {
  u64 q = 0;
  u64 M = 0;
  std::vector<u64> entries;  // one per F-prime, in SplitPrimeData::pairs order

  bool is_zero() const;
  friend bool operator==(const IdealVector& a, const IdealVector& b) {
    return a.q == b.q && a.M == b.M && a.entries == b.entries;
  }
};

/// [x]_{q,M}. Also returns the raw valuations through *valuations when given.
IdealVector ideal_vector(const CycloElt& x, u64 M, const SplitPrimeData& data,
                         std::vector<i64>* valuations = nullptr);

/// a(P) mod M with w = gamma^a(P) at each F-prime P. Throws DomainError("not prime to q").
IdealVector lambda_q(const CycloElt& w, u64 M, const SplitPrimeData& data);

/// theta in (Z/M)[Gal(F/Q)] with theta . P_ref = lambda_q(w). Gal(F/Q) elements
/// are listed by their representatives a in [1, m/2), gcd(a, m) = 1.
struct AnnihilatorElt {
  u64 M = 0;
  std::size_t reference = 0;  // index of P_ref in SplitPrimeData::pairs
  std::vector<u64> group;     // representatives a
  std::vector<u64> coeffs;    // coefficient of sigma_a, mod M
};

AnnihilatorElt lambda_bar(const CycloElt& w, u64 M, const SplitPrimeData& data, std::size_t reference = 0);
/// The same element expressed against another reference prime.
AnnihilatorElt lambda_bar_from_vector(const IdealVector& v, const SplitPrimeData& data, std::size_t reference);

struct FactorizationReport {
  std::vector<u64> s;
  u64 q = 0;
  IdealVector part1;          // [kappa(s)]_q, must vanish
  IdealVector valuation_side;  // [kappa(sq)]_q
  IdealVector dlog_side;       // lambda_q(kappa(s))
  std::vector<i64> valuations;
  bool part1_holds = false;
  bool part2_holds = false;
  bool pass() const { return part1_holds && part2_holds; }
};

/// [kappa(s)]_q = 0 and [kappa(sq)]_q = lambda_q(kappa(s)).
FactorizationReport check_factorization(const EulerSystem& E, const KolyParams& params, const std::vector<u64>& s,
                                        u64 q, u64 seed);
/// The same check against precomputed classes kappa(s) and kappa(sq).
FactorizationReport check_factorization(const KappaClass& ks, const KappaClass& ksq, u64 q);

struct ClassRelation {
  AnnihilatorElt theta;
  CycloElt witness;  // kappa(q)
  IdealVector witness_vector;
  IdealVector lambda_vector;
  bool vectors_match = false;
  /// The norm of kappa(q) with q removed is +-(rational M-th power).
  bool support_above_q = false;
  Rational norm_cofactor;
  bool holds() const { return vectors_match && support_above_q; }
};

ClassRelation class_relation(const EulerSystem& E, const KolyParams& params, u64 q, u64 seed,
                             std::size_t reference = 0);

/// Probabilistic test that x is an M-th power in Q(zeta_m): at split probe primes
/// l = 1 mod lcm(m, M) every valuation is 0 mod M and every unit residue is an
/// M-th power residue.
struct PowerTest {
  bool accepted = false;
  std::vector<u64> probes;
};
PowerTest probable_mth_power(const CycloElt& x, u64 M, unsigned probe_count = 6);

/// Two classes for the same s and different seeds: gamma = beta_b / beta_a lies
/// in F and kappa_a = gamma^M kappa_b, so kappa_a / kappa_b is an M-th power.
struct SeedComparison {
  bool gamma_in_F = false;
  bool exact_power = false;
  PowerTest power_test;
  bool holds() const { return gamma_in_F && exact_power && power_test.accepted; }
};
SeedComparison compare_seeds(const KappaClass& a, const KappaClass& b);

}  // namespace kforge

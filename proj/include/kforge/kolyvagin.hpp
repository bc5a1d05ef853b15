#pragma once

// Kolyvagin primes, the derivative operators N_q, D_q, D_s, closed-form
// cocycles, the Hilbert 90 resolvent and the classes kappa(s).

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "kforge/cyclotomic.hpp"
#include "kforge/euler.hpp"

namespace kforge {

/// F = Q(zeta_m)^+ with m = p^(n+1); M a power of p (M = 1 is the degenerate case).
struct KolyParams {
  u64 p = 5;
  unsigned n = 0;
  u64 M = 5;

  /// Throws DomainError unless p is an odd prime and M = p^k.
  void validate() const;
  u64 conductor() const;
};

/// Also throws DomainError when p lies in the effective S of E.
void validate_for(const KolyParams& params, const EulerSystem& E);

/// Odd primes q <= limit, q = 1 mod M, splitting completely in F (q = +-1 mod m).
/// q = 2 only qualifies in the degenerate M = 1, F = Q case and is left out.
std::vector<u64> find_kolyvagin_primes(const KolyParams& params, u64 limit);
/// Throws DomainError("not a Kolyvagin prime") unless q qualifies and q = 1 mod m.
void require_kolyvagin_prime(const KolyParams& params, u64 q);

/// Integer combination of elements of prod_i Z/orders[i], keyed by exponent tuple.
class GroupRingOp {
 public:
  using Key = std::vector<u64>;

  explicit GroupRingOp(std::vector<u64> orders);
  static GroupRingOp constant(std::vector<u64> orders, const Integer& c);
  /// c * g1^e1 ... gk^ek (exponents reduced).
  static GroupRingOp element(std::vector<u64> orders, Key exponents, const Integer& c = 1);

  const std::vector<u64>& orders() const { return orders_; }
  const std::map<Key, Integer>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  void add_term(Key exponents, const Integer& c);

  GroupRingOp& operator+=(const GroupRingOp& o);
  GroupRingOp& operator-=(const GroupRingOp& o);
  friend GroupRingOp operator+(GroupRingOp a, const GroupRingOp& b) { return a += b; }
  friend GroupRingOp operator-(GroupRingOp a, const GroupRingOp& b) { return a -= b; }
  friend GroupRingOp operator*(const GroupRingOp& a, const GroupRingOp& b);
  friend bool operator==(const GroupRingOp& a, const GroupRingOp& b) {
    return a.orders_ == b.orders_ && a.terms_ == b.terms_;
  }

  /// The same element viewed in the product group new_orders, generator i -> slot.
  GroupRingOp lift(const std::vector<u64>& new_orders, std::size_t slot) const;
  std::string to_string(const std::vector<std::string>& generator_names = {}) const;

 private:
  void require_same_group(const GroupRingOp& o) const;

  std::vector<u64> orders_;
  std::map<Key, Integer> terms_;
};

struct Operators {
  GroupRingOp norm;        // N_q = sum_{i=0}^{q-2} sigma^i
  GroupRingOp derivative;  // D_q = sum_{i=1}^{q-2} i sigma^i
};

/// N_q and D_q in Z[Z/(q-1)]. Throws DomainError unless q >= 3 is prime.
Operators build_operators(u64 q);
/// (sigma - 1) D_q == q - 1 - N_q as an exact group ring identity.
bool derivative_identity_holds(u64 q);

/// prod over terms of sigma(x)^c where the exponent tuple (e_i) names
/// prod_i generators[i]^e_i (residues modulo the conductor of x).
CycloElt apply_group_ring(const GroupRingOp& op, const CycloElt& x, const std::vector<u64>& generators);

/// Level data for s = q_1 ... q_k: the ambient Q(zeta_{ms}), generators sigma_q of
/// G(s) = Gal(Q(zeta_ms)/Q(zeta_m)) and the point zeta_n eta_s.
struct Level {
  KolyParams params;
  std::vector<u64> primes;      // increasing
  u64 conductor = 1;            // m s
  std::vector<u64> generators;  // sigma_q residues mod ms, one per prime
  std::vector<u64> primitive_roots;
  i64 point_exponent = 0;       // zeta_n eta_s = zeta_ms^point_exponent

  std::vector<u64> orders() const;
};

Level make_level(const KolyParams& params, std::vector<u64> s);

struct CocycleValue {
  u64 q = 0;
  u64 generator = 0;
  CycloElt c;
  bool certified = false;     // c^M = (sigma - 1) D_s phi
  bool norm_trivial = false;  // N_<sigma> c = 1
};

struct Cocycle {
  Level level;
  CycloElt derivative;  // D_s phi(zeta_n eta_s)
  std::vector<CocycleValue> values;
  bool certified() const;
};

/// Closed-form M-th roots of (sigma_q - 1) D_s phi, exploiting Frob_q = 1 on F.
/// Throws DomainError for non-Kolyvagin primes and BudgetError("instance too large")
/// for more than two primes.
Cocycle cocycle_closed_form(const EulerSystem& E, const KolyParams& params, const std::vector<u64>& s);

struct Hilbert90 {
  CycloElt beta;
  unsigned attempts = 0;
  bool verified = false;  // sigma(beta) = c_sigma beta for every generator
};

/// beta = sum_g a_g g(theta), a_g the cocycle extension of a_sigma = c_sigma^-1,
/// theta = theta0 + conj(theta0) seeded from seed. Throws BudgetError("resolvent
/// exhausted") after 32 vanishing resolvents and InternalInconsistency when the
/// extension is not well defined.
Hilbert90 hilbert90_beta(const Cocycle& cocycle, u64 seed);

struct KappaClass {
  KolyParams params;
  std::vector<u64> s;
  u64 seed = 0;
  CycloElt kappa;  // in Q(zeta_m), real
  CycloElt beta;   // in Q(zeta_ms)
  Cocycle cocycle;
  unsigned attempts = 0;
  bool invariant = false;
};

/// kappa(s) = D_s phi(zeta_n eta_s) / beta^M. For s = 1, kappa = phi(zeta_n) and beta = 1.
KappaClass kappa(const EulerSystem& E, const KolyParams& params, const std::vector<u64>& s, u64 seed);

}  // namespace kforge

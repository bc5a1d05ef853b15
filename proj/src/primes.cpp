#include "kforge/primes.hpp"

#include <algorithm>

#include "kforge/error.hpp"
#include "kforge/finite_field.hpp"

namespace kforge {

namespace {

constexpr unsigned kMaxPrecision = 512;

// x(root) for the integer numerator vector, modulo mod.
Integer eval_numerators(const std::vector<Integer>& num, const Integer& root, const Integer& mod) {
  Integer acc = 0;
  for (auto it = num.rbegin(); it != num.rend(); ++it) {
    acc = acc * root + *it;
    mpz_mod(acc.get_mpz_t(), acc.get_mpz_t(), mod.get_mpz_t());
  }
  return acc;
}

// x(root) mod q as a residue, or nullopt when x is not a unit there.
std::optional<u64> unit_residue(const CycloElt& x, u64 root, u64 q) {
  const u64 den = mpz_fdiv_ui(x.denominator().get_mpz_t(), q);
  if (den == 0) return std::nullopt;
  const Integer val = eval_numerators(x.numerators(), Integer(static_cast<unsigned long>(root)),
                                      Integer(static_cast<unsigned long>(q)));
  const u64 v = val.get_ui();
  if (v == 0) return std::nullopt;
  return mulmod(v, invmod(den, q), q);
}

void require_same_conductor(const CycloElt& x, const SplitPrimeData& data) {
  if (x.conductor() != data.m) {
    throw DomainError("element lives in Q(zeta_" + std::to_string(x.conductor()) + "), primes are for m = " +
                      std::to_string(data.m));
  }
}

}  // namespace

std::size_t SplitPrimeData::root_index(u64 j) const {
  auto it = std::lower_bound(root_exponents.begin(), root_exponents.end(), j % m);
  if (it == root_exponents.end() || *it != j % m) throw DomainError("root exponent not coprime to m");
  return static_cast<std::size_t>(it - root_exponents.begin());
}

std::size_t SplitPrimeData::pair_of_exponent(u64 j) const {
  const std::size_t idx = root_index(j);
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    if (pairs[i].first == idx || pairs[i].second == idx) return i;
  }
  throw InternalInconsistency("root not covered by the prime pairing");
}

SplitPrimeData split_prime_data(u64 q, u64 m, unsigned precision) {
  if (!is_prime(q)) throw DomainError(std::to_string(q) + " is not prime");
  if (m == 0 || q % m != 1 % m) throw DomainError("prime does not split completely");
  SplitPrimeData d;
  d.q = q;
  d.m = m;
  for (u64 a = 1; a < q; ++a) {
    if (multiplicative_order(a, q) == m) {
      d.g = a;
      break;
    }
  }
  const ZPoly phi_m = cyclotomic_polynomial(m);
  d.root_exponents = unit_residues(m);
  for (u64 j : d.root_exponents) {
    const u64 r = powmod(d.g, j, q);
    d.roots.push_back(r);
    d.lifts.push_back(hensel_lift_root(phi_m, q, r, precision));
  }
  std::vector<u64> sorted = d.roots;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end() || d.roots.size() != totient(m)) {
    throw InternalInconsistency("roots of Phi_m mod q are not distinct");
  }
  for (u64 j : d.root_exponents) {
    if (2 * j > m) continue;
    d.pairs.emplace_back(d.root_index(j), d.root_index((m - j) % m));
  }
  for (const auto& [a, b] : d.pairs) {
    if (mulmod(d.roots[a], d.roots[b], q) != 1 % q) throw InternalInconsistency("prime pairing is not c <-> 1/c");
  }
  d.t = least_primitive_root(q);
  d.gamma = invmod(d.t, q);
  return d;
}

i64 valuation(const CycloElt& x, std::size_t root_index, const SplitPrimeData& data) {
  require_same_conductor(x, data);
  if (x.is_zero()) throw DomainError("valuation of zero");
  const i64 vden = static_cast<i64>(kforge::valuation(x.denominator(), data.q));
  const ZPoly phi_m = cyclotomic_polynomial(data.m);
  ResidueInt lift = data.lifts.at(root_index);
  for (unsigned k = lift.precision(); k <= kMaxPrecision; k *= 2) {
    if (k != lift.precision()) lift = hensel_lift_root(phi_m, data.q, data.roots[root_index], k);
    const Integer val = eval_numerators(x.numerators(), lift.value(), lift.modulus());
    if (val != 0) return static_cast<i64>(kforge::valuation(val, data.q)) - vden;
  }
  throw BudgetError("valuation undecidable at budget");
}

bool IdealVector::is_zero() const {
  return std::all_of(entries.begin(), entries.end(), [](u64 e) { return e == 0; });
}

IdealVector ideal_vector(const CycloElt& x, u64 M, const SplitPrimeData& data, std::vector<i64>* valuations) {
  if (M == 0) throw DomainError("M must be positive");
  IdealVector out{data.q, M, {}};
  if (valuations) valuations->clear();
  for (const auto& [a, b] : data.pairs) {
    const i64 va = valuation(x, a, data);
    const i64 vb = valuation(x, b, data);
    if (va != vb) throw DomainError("ideal_vector: element is not in the real subfield");
    out.entries.push_back(mod_floor(va, M));
    if (valuations) valuations->push_back(va);
  }
  return out;
}

IdealVector lambda_q(const CycloElt& w, u64 M, const SplitPrimeData& data) {
  require_same_conductor(w, data);
  if (M == 0) throw DomainError("M must be positive");
  const FiniteField Fq = FiniteField::prime_field(data.q);
  const auto gamma = Fq.from_int(static_cast<i64>(data.gamma));
  IdealVector out{data.q, M, {}};
  for (const auto& [a, b] : data.pairs) {
    const auto ra = unit_residue(w, data.roots[a], data.q);
    const auto rb = unit_residue(w, data.roots[b], data.q);
    if (!ra || !rb) throw DomainError("not prime to q");
    if (*ra != *rb) throw DomainError("lambda_q: element is not in the real subfield");
    const Integer e = ff_discrete_log(Fq, gamma, Fq.from_int(static_cast<i64>(*ra)));
    out.entries.push_back(mpz_fdiv_ui(e.get_mpz_t(), M));
  }
  return out;
}

AnnihilatorElt lambda_bar_from_vector(const IdealVector& v, const SplitPrimeData& data, std::size_t reference) {
  if (reference >= data.pairs.size()) throw DomainError("reference prime index out of range");
  if (v.entries.size() != data.pairs.size()) throw DomainError("ideal vector does not match the prime data");
  AnnihilatorElt out;
  out.M = v.M;
  out.reference = reference;
  const u64 m = data.m;
  const u64 j_ref = data.root_exponents[data.pairs[reference].first];
  for (u64 a = 1; 2 * a < m; ++a) {
    if (gcd(a, m) != 1) continue;
    // sigma_a(P_ref) is the prime at root exponent j_ref / a.
    const u64 j = mulmod(j_ref, invmod(a, m), m);
    out.group.push_back(a);
    out.coeffs.push_back(v.entries[data.pair_of_exponent(j)]);
  }
  if (m <= 2) {
    out.group.push_back(1);
    out.coeffs.push_back(v.entries.at(0));
  }
  return out;
}

AnnihilatorElt lambda_bar(const CycloElt& w, u64 M, const SplitPrimeData& data, std::size_t reference) {
  return lambda_bar_from_vector(lambda_q(w, M, data), data, reference);
}

FactorizationReport check_factorization(const KappaClass& ks, const KappaClass& ksq, u64 q) {
  std::vector<u64> expected = ks.s;
  expected.push_back(q);
  std::sort(expected.begin(), expected.end());
  if (ksq.s != expected) throw DomainError("check_factorization: classes are not kappa(s) and kappa(sq)");
  if (ks.params.p != ksq.params.p || ks.params.n != ksq.params.n || ks.params.M != ksq.params.M) {
    throw DomainError("check_factorization: parameter mismatch");
  }
  const u64 M = ks.params.M;
  const SplitPrimeData data = split_prime_data(q, ks.params.conductor());
  FactorizationReport r;
  r.s = ks.s;
  r.q = q;
  r.part1 = ideal_vector(ks.kappa, M, data);
  r.part1_holds = r.part1.is_zero();
  r.valuation_side = ideal_vector(ksq.kappa, M, data, &r.valuations);
  r.dlog_side = lambda_q(ks.kappa, M, data);
  r.part2_holds = r.valuation_side == r.dlog_side;
  return r;
}

FactorizationReport check_factorization(const EulerSystem& E, const KolyParams& params, const std::vector<u64>& s,
                                        u64 q, u64 seed) {
  require_kolyvagin_prime(params, q);
  if (std::find(s.begin(), s.end(), q) != s.end()) throw DomainError("q must not divide s");
  std::vector<u64> sq = s;
  sq.push_back(q);
  const KappaClass ks = kappa(E, params, s, seed);
  const KappaClass ksq = kappa(E, params, sq, seed);
  return check_factorization(ks, ksq, q);
}

namespace {

bool is_perfect_power(const Integer& x, u64 M) {
  if (M <= 1 || x == 1) return true;
  Integer root;
  return mpz_root(root.get_mpz_t(), x.get_mpz_t(), M) != 0;
}

Integer strip(Integer x, u64 q) {
  while (mpz_divisible_ui_p(x.get_mpz_t(), q)) mpz_divexact_ui(x.get_mpz_t(), x.get_mpz_t(), q);
  return x;
}

}  // namespace

ClassRelation class_relation(const EulerSystem& E, const KolyParams& params, u64 q, u64 seed,
                             std::size_t reference) {
  require_kolyvagin_prime(params, q);
  const KappaClass k1 = kappa(E, params, {}, seed);
  const KappaClass kq = kappa(E, params, {q}, seed);
  const SplitPrimeData data = split_prime_data(q, params.conductor());
  ClassRelation out;
  out.witness = kq.kappa;
  out.witness_vector = ideal_vector(kq.kappa, params.M, data);
  out.lambda_vector = lambda_q(k1.kappa, params.M, data);
  out.theta = lambda_bar_from_vector(out.lambda_vector, data, reference);
  out.vectors_match = out.witness_vector == out.lambda_vector;
  const Rational norm = absolute_norm(kq.kappa);
  const Integer num = strip(abs(norm.get_num()), q);
  const Integer den = strip(norm.get_den(), q);
  out.norm_cofactor = Rational(norm < 0 ? Integer(-num) : num, den);
  out.norm_cofactor.canonicalize();
  out.support_above_q = is_perfect_power(num, params.M) && is_perfect_power(den, params.M);
  return out;
}

PowerTest probable_mth_power(const CycloElt& x, u64 M, unsigned probe_count) {
  if (x.is_zero()) throw DomainError("M-th power test of zero");
  PowerTest out;
  if (M == 1) {
    out.accepted = true;
    return out;
  }
  const u64 m = x.conductor();
  const u64 step = lcm(m, M);
  for (u64 ell = step + 1; out.probes.size() < probe_count; ell += step) {
    if (!is_prime(ell)) continue;
    out.probes.push_back(ell);
    const SplitPrimeData data = split_prime_data(ell, m);
    for (std::size_t i = 0; i < data.roots.size(); ++i) {
      const i64 v = valuation(x, i, data);
      if (mod_floor(v, M) != 0) return out;
      if (v != 0) continue;
      const auto r = unit_residue(x, data.roots[i], ell);
      if (!r) throw InternalInconsistency("unit residue vanished at a valuation-zero prime");
      if (powmod(*r, (ell - 1) / M, ell) != 1) return out;
    }
  }
  out.accepted = true;
  return out;
}

SeedComparison compare_seeds(const KappaClass& a, const KappaClass& b) {
  if (a.s != b.s || a.params.M != b.params.M || a.params.conductor() != b.params.conductor()) {
    throw DomainError("compare_seeds: classes belong to different instances");
  }
  SeedComparison out;
  const u64 m = a.params.conductor();
  CycloElt gamma = CycloElt::from_rational(cyclotomic_field(m), 1);
  if (!a.s.empty()) {
    const CycloElt big = b.beta * elt_inverse(a.beta);
    bool fixed = true;
    for (u64 g : a.cocycle.level.generators) fixed = fixed && galois_apply(g, big) == big;
    if (fixed) {
      gamma = descend(big, m);
      out.gamma_in_F = is_in_real_subfield(gamma);
    }
  } else {
    out.gamma_in_F = true;
  }
  out.exact_power = out.gamma_in_F && a.kappa == pow(gamma, static_cast<i64>(a.params.M)) * b.kappa;
  out.power_test = probable_mth_power(a.kappa * elt_inverse(b.kappa), a.params.M);
  return out;
}

}  // namespace kforge

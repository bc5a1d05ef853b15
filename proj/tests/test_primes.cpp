#include <doctest.h>

#include <algorithm>
#include <set>

#include "kforge/error.hpp"
#include "kforge/primes.hpp"
#include "oracles.hpp"

using namespace kforge;

namespace {

const EulerSystem& basic() {
  static const EulerSystem E = EulerSystem::parse("1:1,2:-1");
  return E;
}

FieldPtr q5() { return cyclotomic_field(5); }

CycloElt elt(const FieldPtr& f, std::vector<Integer> num, Integer den = 1) {
  return CycloElt(f, std::move(num), std::move(den));
}

u64 least_primitive_root_scan(u64 q) {
  for (u64 g = 2; g < q; ++g) {
    bool full = true;
    for (u64 k = 1; k + 1 < q && full; ++k) full = oracle::pow_mod(g, k, q) != 1;
    if (full) return g;
  }
  return 1;
}

// x(r) mod q from the rational coefficients; -1 when the denominator or value vanishes.
i64 reduce_at(const CycloElt& x, u64 r, u64 q) {
  const auto c = x.coeffs();
  i64 num = 0;
  Integer den = x.denominator();
  if (mpz_fdiv_ui(den.get_mpz_t(), q) == 0) return -1;
  for (std::size_t i = c.size(); i-- > 0;) {
    const Integer scaled = c[i].get_num() * (den / c[i].get_den());
    const i64 ci = static_cast<i64>(mpz_fdiv_ui(scaled.get_mpz_t(), q));
    num = static_cast<i64>((static_cast<u64>(num) * r + static_cast<u64>(ci)) % q);
  }
  if (num == 0) return -1;
  const u64 dinv = oracle::pow_mod(mpz_fdiv_ui(den.get_mpz_t(), q), q - 2, q);
  return static_cast<i64>(static_cast<u64>(num) * dinv % q);
}

// lambda_q by brute force: per F-prime, reduce at one of its roots and scan powers of t^-1.
std::vector<u64> lambda_oracle(const CycloElt& w, u64 M, const SplitPrimeData& d) {
  const u64 t = least_primitive_root_scan(d.q);
  const u64 gamma = oracle::pow_mod(t, d.q - 2, d.q);
  std::vector<u64> out;
  for (const auto& pr : d.pairs) {
    const i64 v = reduce_at(w, d.roots[pr.first], d.q);
    REQUIRE(v > 0);
    out.push_back(static_cast<u64>(oracle::dlog_scan(gamma, static_cast<u64>(v), d.q)) % M);
  }
  return out;
}

i64 vq(const Rational& r, u64 q) {
  auto v = [q](Integer x) {
    i64 k = 0;
    x = abs(x);
    while (x != 0 && mpz_divisible_ui_p(x.get_mpz_t(), q)) {
      mpz_divexact_ui(x.get_mpz_t(), x.get_mpz_t(), q);
      ++k;
    }
    return k;
  };
  return v(r.get_num()) - v(r.get_den());
}

// Rebuilds [w]_q from theta . P_ref.
std::vector<u64> apply_theta(const AnnihilatorElt& th, const SplitPrimeData& d) {
  std::vector<u64> v(d.pairs.size(), 0);
  const u64 j_ref = d.root_exponents[d.pairs[th.reference].first];
  for (std::size_t i = 0; i < th.group.size(); ++i) {
    const u64 a_inv = oracle::pow_mod(th.group[i], oracle::totient(d.m) - 1, d.m);
    v[d.pair_of_exponent(j_ref * a_inv % d.m)] = th.coeffs[i];
  }
  return v;
}

}  // namespace

TEST_CASE("split prime data at q = 11 and 31") {
  const SplitPrimeData d = split_prime_data(11, 5);
  CHECK(d.g == 3);
  CHECK(d.roots == std::vector<u64>{3, 9, 5, 4});
  CHECK(d.t == 2);
  CHECK(d.gamma == 6);
  REQUIRE(d.pairs.size() == 2);
  CHECK(std::set<u64>{d.roots[d.pairs[0].first], d.roots[d.pairs[0].second]} == std::set<u64>{3, 4});
  CHECK(std::set<u64>{d.roots[d.pairs[1].first], d.roots[d.pairs[1].second]} == std::set<u64>{9, 5});

  const SplitPrimeData e = split_prime_data(31, 5);
  CHECK(e.g == 2);
  CHECK(e.roots == std::vector<u64>{2, 4, 8, 16});
  CHECK(e.t == 3);
  CHECK(e.gamma == 21);
}

TEST_CASE("split prime roots match a root scan of Phi_m") {
  for (auto [m, qs] : std::vector<std::pair<u64, std::vector<u64>>>{
           {5, {11, 31, 41, 61, 71, 101}}, {9, {19, 37, 73}}, {7, {29, 43, 71}}, {25, {101, 151}}}) {
    const oracle::QVec phi = oracle::cyclotomic_mobius(m);
    for (u64 q : qs) {
      const SplitPrimeData d = split_prime_data(q, m);
      std::set<u64> scanned;
      for (u64 x = 0; x < q; ++x) {
        u64 acc = 0;
        for (std::size_t i = phi.size(); i-- > 0;) {
          const i64 c = phi[i].get_num().get_si();
          acc = (acc * x + static_cast<u64>(((c % (i64)q) + (i64)q) % (i64)q)) % q;
        }
        if (acc == 0) scanned.insert(x);
      }
      CHECK(std::set<u64>(d.roots.begin(), d.roots.end()) == scanned);
      CHECK(d.pairs.size() == oracle::totient(m) / 2);
      for (const auto& [a, b] : d.pairs) CHECK(d.roots[a] * d.roots[b] % q == 1);
      CHECK(d.t == least_primitive_root_scan(q));
      CHECK(d.t * d.gamma % q == 1);
    }
  }
}

TEST_CASE("split prime data rejects bad input") {
  CHECK_THROWS_AS(split_prime_data(13, 5), DomainError);
  CHECK_THROWS_AS(split_prime_data(19, 5), DomainError);  // 19 = -1 mod 5 splits only in the real subfield
  CHECK_THROWS_AS(split_prime_data(21, 5), DomainError);
  const SplitPrimeData d = split_prime_data(11, 5);
  CHECK_THROWS_AS(d.root_index(5), DomainError);
}

TEST_CASE("valuation examples over q = 11") {
  const SplitPrimeData d = split_prime_data(11, 5);
  const auto f = q5();
  const CycloElt eleven = CycloElt::from_rational(f, 11);
  for (std::size_t i = 0; i < 4; ++i) CHECK(valuation(eleven, i, d) == 1);
  const CycloElt unit = elt(f, {1, 1});  // 1 + zeta, norm Phi_5(-1) = 1
  for (std::size_t i = 0; i < 4; ++i) CHECK(valuation(unit, i, d) == 0);
  // zeta - 3 has norm Phi_5(3) = 121, all of it at the root-3 prime.
  const CycloElt z3 = elt(f, {-3, 1});
  CHECK(absolute_norm(z3) == Rational(121));
  CHECK(valuation(z3, d.root_index(1), d) == 2);
  CHECK(valuation(z3, d.root_index(2), d) == 0);
  CHECK(valuation(z3, d.root_index(3), d) == 0);
  CHECK(valuation(z3, d.root_index(4), d) == 0);
  CHECK(valuation(elt(f, {1}, 121), 0, d) == -2);
  CHECK_THROWS_AS(valuation(CycloElt(f), 0, d), DomainError);
  CHECK_THROWS_AS(valuation(CycloElt::from_rational(cyclotomic_field(7), 1), 0, d), DomainError);
}

TEST_CASE("valuations sum to the valuation of the norm") {
  oracle::Gen gen(17);
  for (auto [m, q] : std::vector<std::pair<u64, u64>>{{5, 11}, {5, 31}, {9, 19}, {7, 29}}) {
    const SplitPrimeData d = split_prime_data(q, m);
    const auto f = cyclotomic_field(m);
    for (int i = 0; i < 40; ++i) {
      CycloElt x = gen.nonzero(f, 12);
      // Push some q-divisibility in by multiplying with (zeta - r) for a random root.
      if (i % 2) x *= elt(f, {-static_cast<i64>(d.roots[gen.urange(0, d.roots.size() - 1)]), 1});
      i64 sum = 0;
      for (std::size_t k = 0; k < d.roots.size(); ++k) sum += valuation(x, k, d);
      REQUIRE(sum == vq(absolute_norm(x), q));
    }
  }
}

TEST_CASE("ideal vectors") {
  const SplitPrimeData d = split_prime_data(11, 5);
  const auto f = q5();
  CHECK(ideal_vector(elt(f, {1, 1}), 5, d).is_zero());
  std::vector<i64> vals;
  const IdealVector v = ideal_vector(CycloElt::from_rational(f, 11), 5, d, &vals);
  CHECK(v.entries == std::vector<u64>{1, 1});
  CHECK(vals == std::vector<i64>{1, 1});
  CHECK(ideal_vector(CycloElt::from_rational(f, Rational(1, 11)), 5, d).entries == std::vector<u64>{4, 4});
  CHECK(ideal_vector(pow(CycloElt::from_rational(f, 11), 5), 5, d).is_zero());
  // zeta - 3 is not real, so its two paired roots disagree.
  CHECK_THROWS_AS(ideal_vector(elt(f, {-3, 1}), 5, d), DomainError);
  CHECK_THROWS_AS(ideal_vector(elt(f, {1, 1}), 0, d), DomainError);
}

TEST_CASE("lambda_q examples") {
  const SplitPrimeData d = split_prime_data(11, 5);
  const auto f = q5();
  CHECK(lambda_q(CycloElt::from_rational(f, 1), 5, d).is_zero());
  const CycloElt w = phi_eval(basic(), RootOfUnity(5, 1));
  // At root 3: w = 8 mod 11 and 6^7 = 8, so the first entry is 7 mod 5.
  CHECK(reduce_at(w, 3, 11) == 8);
  const IdealVector l = lambda_q(w, 5, d);
  CHECK(l.entries == std::vector<u64>{2, 3});
  CHECK(l.entries == lambda_oracle(w, 5, d));
  CHECK_THROWS_AS(lambda_q(CycloElt::from_rational(f, 11), 5, d), DomainError);
  CHECK_THROWS_AS(lambda_q(elt(f, {-3, 1}), 5, d), DomainError);
  CHECK_THROWS_AS(lambda_q(CycloElt::from_rational(cyclotomic_field(7), 1), 5, d), DomainError);
}

TEST_CASE("lambda_q agrees with brute force and kills M-th powers") {
  oracle::Gen gen(23);
  for (auto [m, q, M] : std::vector<std::tuple<u64, u64, u64>>{{5, 11, 5}, {5, 31, 5}, {5, 101, 25}, {9, 19, 3}}) {
    const SplitPrimeData d = split_prime_data(q, m);
    const auto f = cyclotomic_field(m);
    int done = 0;
    while (done < 15) {
      const CycloElt x = gen.nonzero(f, 6);
      const CycloElt w = x + galois_apply(static_cast<u64>(m - 1), x);  // real
      if (w.is_zero() || vq(absolute_norm(w), q) != 0) continue;
      const CycloElt u = gen.nonzero(f, 4);
      const CycloElt ur = u * galois_apply(static_cast<u64>(m - 1), u);
      if (ur.is_zero() || vq(absolute_norm(ur), q) != 0) continue;
      const IdealVector l = lambda_q(w, M, d);
      REQUIRE(l.entries == lambda_oracle(w, M, d));
      REQUIRE(lambda_q(w * pow(ur, static_cast<i64>(M)), M, d) == l);
      ++done;
    }
  }
}

TEST_CASE("lambda_q is Galois equivariant") {
  oracle::Gen gen(31);
  const u64 m = 5, q = 11, M = 5;
  const SplitPrimeData d = split_prime_data(q, m);
  const auto f = q5();
  int done = 0;
  while (done < 20) {
    const CycloElt x = gen.nonzero(f, 6);
    const CycloElt w = x + galois_apply(4, x);
    if (w.is_zero() || vq(absolute_norm(w), q) != 0) continue;
    const IdealVector l = lambda_q(w, M, d);
    for (u64 b : {2u, 3u}) {
      const IdealVector lb = lambda_q(galois_apply(b, w), M, d);
      for (const auto& pr : d.pairs) {
        const u64 j = d.root_exponents[pr.first];
        REQUIRE(lb.entries[d.pair_of_exponent(j)] == l.entries[d.pair_of_exponent(j * b % m)]);
      }
    }
    ++done;
  }
}

TEST_CASE("lambda_bar rebuilds the vector from any reference prime") {
  for (auto [m, q] : std::vector<std::pair<u64, u64>>{{5, 11}, {9, 19}, {7, 29}}) {
    const SplitPrimeData d = split_prime_data(q, m);
    oracle::Gen gen(q);
    const auto f = cyclotomic_field(m);
    CycloElt w;
    do {
      const CycloElt x = gen.nonzero(f, 5);
      w = x + galois_apply(static_cast<u64>(m - 1), x);
    } while (w.is_zero() || vq(absolute_norm(w), q) != 0);
    const IdealVector l = lambda_q(w, m, d);
    for (std::size_t ref = 0; ref < d.pairs.size(); ++ref) {
      const AnnihilatorElt th = lambda_bar(w, m, d, ref);
      CHECK(th.reference == ref);
      CHECK(th.group.size() == d.pairs.size());
      CHECK(th.group.front() == 1);
      CHECK(th.coeffs.front() == l.entries[ref]);
      CHECK(apply_theta(th, d) == l.entries);
    }
  }
  const SplitPrimeData d = split_prime_data(11, 5);
  CHECK_THROWS_AS(lambda_bar_from_vector(IdealVector{11, 5, {1, 2}}, d, 2), DomainError);
  CHECK_THROWS_AS(lambda_bar_from_vector(IdealVector{11, 5, {1}}, d, 0), DomainError);
}

TEST_CASE("factorization check at q = 11 and 31") {
  const KolyParams P{5, 0, 5};
  const FactorizationReport r11 = check_factorization(basic(), P, {}, 11, 42);
  CHECK(r11.part1_holds);
  CHECK(r11.part2_holds);
  CHECK(r11.dlog_side.entries == std::vector<u64>{2, 3});
  CHECK(r11.valuation_side == r11.dlog_side);
  const FactorizationReport r31 = check_factorization(basic(), P, {}, 31, 42);
  CHECK(r31.pass());
  CHECK(r31.dlog_side.entries == std::vector<u64>{1, 4});
  // The valuation side is read off kappa(q) independently of lambda_q.
  const KappaClass k31 = kappa(basic(), P, {31}, 42);
  CHECK(ideal_vector(k31.kappa, 5, split_prime_data(31, 5)).entries == std::vector<u64>{1, 4});

  CHECK_THROWS_AS(check_factorization(basic(), P, {}, 13, 42), DomainError);
  CHECK_THROWS_AS(check_factorization(basic(), P, {11}, 11, 42), DomainError);
  const KappaClass k1 = kappa(basic(), P, {}, 42);
  CHECK_THROWS_AS(check_factorization(k1, k31, 11), DomainError);
}

TEST_CASE("factorization check for p = 3, n = 1") {
  const KolyParams P{3, 1, 3};
  for (u64 q : {19u, 37u}) {
    const FactorizationReport r = check_factorization(basic(), P, {}, q, 7);
    CHECK(r.pass());
  }
}

TEST_CASE("class relation") {
  const KolyParams P{5, 0, 5};
  const ClassRelation c0 = class_relation(basic(), P, 11, 42, 0);
  CHECK(c0.holds());
  CHECK(c0.lambda_vector.entries == std::vector<u64>{2, 3});
  CHECK(c0.norm_cofactor == Rational(Integer(1), Integer("6148153756249382761936206001")));
  // The cofactor is a rational fifth power.
  Integer root;
  CHECK(mpz_root(root.get_mpz_t(), c0.norm_cofactor.get_den().get_mpz_t(), 5) != 0);
  const SplitPrimeData d = split_prime_data(11, 5);
  CHECK(apply_theta(c0.theta, d) == c0.witness_vector.entries);

  const ClassRelation c1 = class_relation(basic(), P, 11, 42, 1);
  CHECK(c1.holds());
  CHECK(c1.witness_vector == c0.witness_vector);
  CHECK(apply_theta(c1.theta, d) == c0.witness_vector.entries);
  CHECK(c1.theta.coeffs.front() == c0.lambda_vector.entries[1]);
}

TEST_CASE("probabilistic M-th power test") {
  const auto f = q5();
  const CycloElt u = elt(f, {2, -1, 3, 1}, 7);
  CHECK(probable_mth_power(pow(u, 5), 5).accepted);
  CHECK(probable_mth_power(pow(u, 5), 5).probes.size() == 6);
  CHECK_FALSE(probable_mth_power(pow(u, 5) * elt(f, {2, 1}), 5).accepted);
  CHECK_FALSE(probable_mth_power(CycloElt::from_rational(f, 2), 5).accepted);
  CHECK(probable_mth_power(CycloElt::from_rational(f, 32), 5).accepted);
  CHECK(probable_mth_power(elt(f, {2, 1}), 1).accepted);
  CHECK_THROWS_AS(probable_mth_power(CycloElt(f), 5), DomainError);
  for (u64 l : probable_mth_power(pow(u, 5), 5).probes) {
    CHECK(oracle::is_prime(l));
    CHECK(l % 5 == 1);
  }
}

TEST_CASE("classes from different seeds differ by an M-th power") {
  const KolyParams P{5, 0, 5};
  const KappaClass a = kappa(basic(), P, {11}, 42);
  const KappaClass b = kappa(basic(), P, {11}, 43);
  const SeedComparison cmp = compare_seeds(a, b);
  CHECK(cmp.gamma_in_F);
  CHECK(cmp.exact_power);
  CHECK(cmp.power_test.accepted);
  CHECK(cmp.holds());
  const KappaClass k1a = kappa(basic(), P, {}, 42);
  const KappaClass k1b = kappa(basic(), P, {}, 43);
  CHECK(compare_seeds(k1a, k1b).holds());
  CHECK_THROWS_AS(compare_seeds(a, k1a), DomainError);
}

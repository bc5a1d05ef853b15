#include <doctest.h>

#include "kforge/error.hpp"
#include "kforge/euler.hpp"
#include "oracles.hpp"

using namespace kforge;

namespace {

CycloElt z(u64 m, i64 e = 1) { return CycloElt::root_of_unity(cyclotomic_field(m), e); }
CycloElt q(u64 m, const Rational& r) { return CycloElt::from_rational(cyclotomic_field(m), r); }

const EulerSystem& basic() {
  static const EulerSystem E = EulerSystem::parse("1:1,2:-1");
  return E;
}

std::string detail(const AxiomReport& r, const std::string& key) {
  for (const auto& [k, v] : r.details)
    if (k == key) return v;
  return "";
}

bool close(const oracle::Cx& a, const oracle::Cx& b) { return std::abs(a - b) <= 1e-8L * (1 + std::abs(b)); }

// Numerical phi(zeta_N^e), eta != 1, for a base system with optional compose and twist.
oracle::Cx phi_numeric(const EulerSystem& E, u64 N, i64 e) {
  const u64 h = E.twist_order();
  const u64 L = N * h / oracle::gcd(N, h);
  const i64 n = E.compose_n().value_or(1);
  const i64 eL = e * static_cast<i64>(L / N);
  if (h == 1) return oracle::lambda_numeric(E.base().pairs(), L, n * eL);
  const i64 xi = static_cast<i64>(E.twist()->exponent * (L / h));
  oracle::Cx acc = 1;
  for (u64 tau = 1; tau < h; ++tau) {
    if (oracle::gcd(tau, h) != 1) continue;
    acc *= oracle::lambda_numeric(E.base().pairs(), L, n * (eL + static_cast<i64>(tau) * xi));
  }
  return acc;
}

const char* kOmegas[] = {"1:1,2:-1", "1:2,3:-2", "2:1,3:-1", "1:1,2:-1,compose=3", "1:1,2:-1,twist=3:1",
                         "1:1,2:-1,compose=5,twist=3:1"};

}  // namespace

TEST_CASE("omega validation") {
  CHECK_THROWS_AS(OmegaSpec({{1, 1}}), DomainError);
  CHECK_THROWS_AS(OmegaSpec({{0, 1}, {2, -1}}), DomainError);
  CHECK_THROWS_AS(OmegaSpec({}), DomainError);
  const OmegaSpec om({{6, 1}, {-5, -1}});
  CHECK(om.excluded_primes() == std::vector<u64>{2, 3, 5});
  CHECK(om.value_at_one() == Rational(-6, 5));
  CHECK(OmegaSpec({{1, 1}, {2, -1}}).value_at_one() == Rational(1, 2));
}

TEST_CASE("omega strings parse and print") {
  for (const char* s : kOmegas) CHECK(EulerSystem::parse(s).to_string() == s);
  const EulerSystem E = EulerSystem::parse("1:1,2:-1,compose=3");
  CHECK(E.compose_n() == 3);
  CHECK(E.excluded_primes() == std::vector<u64>{2, 3});
  CHECK(EulerSystem::parse("1:1,2:-1,twist=7:2").excluded_primes() == std::vector<u64>{2, 7});
  CHECK_THROWS_AS(EulerSystem::parse(" 1:1,2:-1"), DomainError);
}

TEST_CASE("malformed omega strings report a position") {
  for (const char* s : {"1:1,2:", "1;1,2:-1", "1:1,2:-1,compose=x", "", "1:1,2:-1,twist=3"}) {
    try {
      EulerSystem::parse(s);
      FAIL("accepted " << s);
    } catch (const DomainError& e) {
      CHECK(std::string(e.what()).find("position") != std::string::npos);
    }
  }
  CHECK_THROWS_AS(EulerSystem::parse("1:1"), DomainError);
  CHECK_THROWS_AS(EulerSystem::parse("1:1,2:-1,compose=0"), DomainError);
}

TEST_CASE("twists must avoid the base S and be primitive") {
  CHECK_THROWS_AS(EulerSystem::parse("1:1,3:-1,twist=3:1"), DomainError);
  CHECK_THROWS_AS(EulerSystem::parse("1:1,2:-1,twist=4:1"), DomainError);
  CHECK_THROWS_AS(EulerSystem::parse("1:1,2:-1,twist=9:3"), DomainError);
}

TEST_CASE("phi values of the basic system") {
  CHECK(phi_eval(basic(), RootOfUnity(1, 0)) == q(1, Rational(1, 2)));
  CHECK(phi_eval(basic(), RootOfUnity(3, 1)) == q(3, -1));
  CHECK(phi_eval(basic(), RootOfUnity(5, 1)) == -(z(5, 2) + z(5, 3)));
  // A non-reduced exponent names the same root.
  CHECK(phi_eval(basic(), RootOfUnity(15, 3)) == embed_up(phi_eval(basic(), RootOfUnity(5, 1)), 15));
}

TEST_CASE("phi agrees with the numerical product formula") {
  for (const char* s : kOmegas) {
    const EulerSystem E = EulerSystem::parse(s);
    for (u64 N : {5ul, 7ul, 11ul, 13ul, 35ul}) {
      if (!E.admits_order(N)) continue;
      for (i64 e = 1; e < static_cast<i64>(N); ++e) {
        if (oracle::gcd(e, N) != 1) continue;
        const CycloElt v = phi_eval(E, RootOfUnity(N, e));
        REQUIRE(v.conductor() == N);
        REQUIRE(close(oracle::embed(v, 1), phi_numeric(E, N, e)));
      }
    }
  }
}

TEST_CASE("roots of unity outside W_S are rejected") {
  CHECK_THROWS_AS(phi_eval(basic(), RootOfUnity(4, 1)), DomainError);
  CHECK_THROWS_AS(phi_eval(EulerSystem::parse("1:2,3:-2"), RootOfUnity(3, 1)), DomainError);
  CHECK_THROWS_AS(check_equivariance(basic(), RootOfUnity(6, 1), 5), DomainError);
  CHECK_THROWS_AS(check_distribution(basic(), RootOfUnity(5, 1), 2), DomainError);
  CHECK(basic().admits_order(15));
  CHECK_FALSE(basic().admits_order(10));
}

TEST_CASE("equivariance examples") {
  CHECK(check_equivariance(basic(), RootOfUnity(5, 1), 2).pass);
  CHECK(check_equivariance(basic(), RootOfUnity(5, 1), -1).pass);
  for (i64 a : {1, 2, 7, -3}) CHECK(check_equivariance(EulerSystem::parse("2:1,3:-1"), RootOfUnity(1, 0), a).pass);
  CHECK_THROWS_AS(check_equivariance(basic(), RootOfUnity(5, 1), 5), DomainError);
}

TEST_CASE("distribution examples") {
  const AxiomReport at_one = check_distribution(basic(), RootOfUnity(1, 0), 3);
  CHECK(at_one.pass);
  CHECK(at_one.witness.at(0).coeffs == std::vector<std::string>{"1/2"});
  CHECK(at_one.witness.at(1).coeffs == std::vector<std::string>{"1/2"});
  // phi(zeta_3) phi(zeta_3^2) = (-1)(-1)
  CHECK(phi_eval(basic(), RootOfUnity(3, 1)) * phi_eval(basic(), RootOfUnity(3, 2)) == q(3, 1));
  CHECK(check_distribution(basic(), RootOfUnity(5, 1), 3).pass);
  const AxiomReport collapse = check_distribution(basic(), RootOfUnity(3, 1), 3);
  CHECK(collapse.pass);
  CHECK(collapse.witness.at(1).coeffs == std::vector<std::string>{"1/2", "0"});
}

TEST_CASE("congruence examples") {
  const AxiomReport r5 = check_congruence(basic(), RootOfUnity(5, 1), 3);
  CHECK(r5.pass);
  CHECK(detail(r5, "residue_field") == "3^4");
  const AxiomReport r7 = check_congruence(basic(), RootOfUnity(7, 1), 3);
  CHECK(r7.pass);
  CHECK(detail(r7, "residue_field") == "3^6");
  CHECK(check_congruence(basic(), RootOfUnity(1, 0), 3).pass);
  CHECK_THROWS_AS(check_congruence(basic(), RootOfUnity(3, 1), 3), DomainError);
}

TEST_CASE("axiom grid across systems") {
  for (const char* s : kOmegas) {
    const EulerSystem E = EulerSystem::parse(s);
    for (u64 N : {1ul, 3ul, 5ul, 7ul}) {
      if (!E.admits_order(N)) continue;
      const RootOfUnity eta(N, 1);
      for (i64 a : {-1, 2, 3}) {
        if (N > 1 && oracle::gcd(static_cast<u64>(a < 0 ? -a : a), N) != 1) continue;
        INFO(s << " eta order " << N << " a " << a);
        REQUIRE(check_equivariance(E, eta, a).pass);
      }
      for (u64 qq : {3ul, 7ul, 11ul}) {
        const auto& S = E.excluded_primes();
        if (std::find(S.begin(), S.end(), qq) != S.end()) continue;
        INFO(s << " eta order " << N << " q " << qq);
        REQUIRE(check_distribution(E, eta, qq).pass);
        if (N % qq != 0) REQUIRE(check_congruence(E, eta, qq).pass);
      }
    }
  }
}

TEST_CASE("Frobenius norm relation") {
  CHECK(check_frobenius_norm(basic(), 5, 3).pass);
  CHECK(check_frobenius_norm(basic(), 7, 3).pass);
  const AxiomReport r = check_frobenius_norm(basic(), 5, 11);
  CHECK(r.pass);
  CHECK(detail(r, "frobenius_trivial") == "true");
  CHECK(r.witness.at(1).coeffs == std::vector<std::string>{"1", "0", "0", "0"});
  CHECK(check_frobenius_norm(EulerSystem::parse("1:1,2:-1,twist=3:1"), 5, 7).pass);
  CHECK_THROWS_AS(check_frobenius_norm(basic(), 1, 3), DomainError);
  CHECK_THROWS_AS(check_frobenius_norm(basic(), 5, 5), DomainError);
}

TEST_CASE("norm compatibility in the tower") {
  const AxiomReport r = check_tower_norm(basic(), 5, 0);
  CHECK(r.pass);
  CHECK(detail(r, "ambient_conductor") == "25");
  CHECK(check_tower_norm(basic(), 3, 0).pass);
  CHECK(check_tower_norm(EulerSystem::parse("1:1,2:-1,twist=3:1"), 5, 0).pass);
  CHECK(check_tower_norm(EulerSystem::parse("1:2,3:-2"), 5, 0).pass);
  CHECK_THROWS_AS(check_tower_norm(EulerSystem::parse("1:2,3:-2"), 3, 0), DomainError);
}

TEST_CASE("unit examples") {
  const AxiomReport r = check_unit(basic(), RootOfUnity(5, 1));
  CHECK(r.pass);
  CHECK(detail(r, "minimal_polynomial") == "x^2 - x - 1");
  CHECK(detail(r, "norm_from_own_field") == "-1");
  CHECK(detail(r, "absolute_norm") == "1");
  const AxiomReport r3 = check_unit(basic(), RootOfUnity(3, 1));
  CHECK(r3.pass);
  CHECK(r3.witness.at(0).coeffs == std::vector<std::string>{"-1", "0"});
  CHECK(check_unit(basic(), RootOfUnity(7, 1)).pass);
  CHECK(detail(check_unit(basic(), RootOfUnity(7, 1)), "minimal_polynomial") == "x^3 + 2x^2 - x - 1");
  CHECK_THROWS_AS(check_unit(basic(), RootOfUnity(1, 0)), DomainError);
}

TEST_CASE("cyclotomic unit generators") {
  CHECK(cyclotomic_unit_indices(5, 0) == std::vector<u64>{2});
  CHECK(cyclotomic_unit_indices(7, 0) == std::vector<u64>{2, 3});
  CHECK(cyclotomic_unit_indices(3, 1) == std::vector<u64>{2, 4});
  const FieldPtr f = cyclotomic_field(11);
  for (u64 a : cyclotomic_unit_indices(11, 0)) {
    const CycloElt xi = cyclotomic_unit(f, a);
    CHECK(is_in_real_subfield(xi));
    const Rational n = absolute_norm(xi);
    CHECK((n == 1 || n == -1));
  }
}

namespace {

// Numerical re-multiplication of a decomposition through the identity embedding.
oracle::Cx rebuild(const Decomposition& d) {
  const FieldPtr f = cyclotomic_field(d.conductor);
  oracle::Cx acc = oracle::root(d.conductor, static_cast<i64>(d.root_exponent)) * static_cast<long double>(d.sign);
  for (std::size_t j = 0; j < d.generators.size(); ++j) {
    acc *= std::pow(oracle::embed(cyclotomic_unit(f, d.generators[j]), 1), static_cast<long double>(d.exponents[j].get_si()));
  }
  return acc;
}

}  // namespace

TEST_CASE("decomposition of phi(zeta_p)") {
  for (u64 p : {5ul, 7ul, 11ul, 13ul}) {
    const CycloElt u = phi_eval(basic(), RootOfUnity(p, 1));
    const Decomposition d = decompose_over_cyclotomic_units(u, p, 0);
    CHECK(d.verified);
    CHECK(close(rebuild(d), oracle::embed(u, 1)));
  }
  const Decomposition d5 = decompose_over_cyclotomic_units(phi_eval(basic(), RootOfUnity(5, 1)), 5, 0);
  REQUIRE(d5.exponents.size() == 1);
  CHECK(abs(d5.exponents[0]) == 1);
  const Decomposition d7 = decompose_over_cyclotomic_units(phi_eval(basic(), RootOfUnity(7, 1)), 7, 0);
  CHECK(d7.exponents == std::vector<Integer>{1, -1});
  CHECK(d7.sign == -1);
  const Decomposition d11 = decompose_over_cyclotomic_units(phi_eval(basic(), RootOfUnity(11, 1)), 11, 0);
  CHECK(d11.exponents == std::vector<Integer>{1, 0, -1, 0});
}

TEST_CASE("decomposition in the second tower layer") {
  const CycloElt u = phi_eval(basic(), RootOfUnity(25, 1));
  const Decomposition d = decompose_over_cyclotomic_units(u, 5, 1);
  CHECK(d.verified);
  CHECK(d.exponents.size() == 9);
  CHECK(close(rebuild(d), oracle::embed(u, 1)));
}

TEST_CASE("decomposition edge cases") {
  const FieldPtr f = cyclotomic_field(7);
  const Decomposition g = decompose_over_cyclotomic_units(cyclotomic_unit(f, 2), 7, 0);
  CHECK(g.exponents == std::vector<Integer>{1, 0});
  CHECK(g.sign == 1);
  CHECK(g.root_exponent == 0);
  const Decomposition one = decompose_over_cyclotomic_units(q(7, 1), 7, 0);
  CHECK(one.exponents == std::vector<Integer>{0, 0});
  const Decomposition prod =
      decompose_over_cyclotomic_units(pow(cyclotomic_unit(f, 2), 3) * elt_inverse(cyclotomic_unit(f, 3)), 7, 0);
  CHECK(prod.exponents == std::vector<Integer>{3, -1});
  CHECK_THROWS_AS(decompose_over_cyclotomic_units(q(7, 2), 7, 0), DomainError);
  CHECK_THROWS_AS(decompose_over_cyclotomic_units(z(7), 7, 0), DomainError);
  CHECK_THROWS_AS(decompose_over_cyclotomic_units(q(7, 1), 9, 0), DomainError);
}

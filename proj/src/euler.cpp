#include "kforge/euler.hpp"

#include <boost/multiprecision/eigen.hpp>
#include <boost/multiprecision/mpfr.hpp>
#include <Eigen/Dense>

#include <algorithm>
#include <charconv>
#include <sstream>

#include "kforge/error.hpp"
#include "kforge/finite_field.hpp"

namespace kforge {

// ---------------------------------------------------------------------------
// OmegaSpec / EulerSystem

namespace {

std::vector<u64> merge_primes(std::vector<u64> s, i64 x) {
  const u64 ax = x < 0 ? static_cast<u64>(-(x + 1)) + 1 : static_cast<u64>(x);
  for (u64 p : prime_divisors(ax)) s.push_back(p);
  std::sort(s.begin(), s.end());
  s.erase(std::unique(s.begin(), s.end()), s.end());
  return s;
}

}  // namespace

OmegaSpec::OmegaSpec(std::vector<std::pair<i64, i64>> pairs) : pairs_(std::move(pairs)), excluded_{2} {
  if (pairs_.empty()) throw DomainError("omega: no (a, n) pairs given");
  i64 total = 0;
  for (auto [a, n] : pairs_) {
    if (a == 0) throw DomainError("omega: a_j must be nonzero");
    total += n;
    excluded_ = merge_primes(std::move(excluded_), a);
  }
  if (total != 0) throw DomainError("omega: exponents must sum to 0 (sum is " + std::to_string(total) + ")");
}

Rational OmegaSpec::value_at_one() const {
  Rational r = 1;
  for (auto [a, n] : pairs_) {
    Integer base = static_cast<long>(a);
    Integer pw;
    mpz_pow_ui(pw.get_mpz_t(), base.get_mpz_t(), static_cast<unsigned long>(n < 0 ? -n : n));
    if (n >= 0) {
      r *= pw;
    } else {
      r /= pw;
    }
  }
  r.canonicalize();
  return r;
}

EulerSystem::EulerSystem(OmegaSpec base, std::optional<i64> compose_n, std::optional<RootOfUnity> twist)
    : base_(std::move(base)), compose_(compose_n), twist_(twist), excluded_(base_.excluded_primes()) {
  if (compose_) {
    if (*compose_ == 0) throw DomainError("compose: n must be nonzero");
    excluded_ = merge_primes(std::move(excluded_), *compose_);
  }
  if (twist_) {
    const u64 h = twist_->order;
    if (h > 1 && gcd(twist_->exponent, h) != 1) throw DomainError("twist: xi must be a primitive h-th root of unity");
    for (u64 p : prime_divisors(h)) {
      if (std::binary_search(base_.excluded_primes().begin(), base_.excluded_primes().end(), p)) {
        throw DomainError("twist: h = " + std::to_string(h) + " shares the prime " + std::to_string(p) +
                          " with the base S");
      }
    }
    excluded_ = merge_primes(std::move(excluded_), static_cast<i64>(h));
  }
}

bool EulerSystem::admits_order(u64 N) const {
  return std::none_of(excluded_.begin(), excluded_.end(), [N](u64 p) { return N % p == 0; });
}

std::string EulerSystem::to_string() const {
  std::ostringstream os;
  bool first = true;
  for (auto [a, n] : base_.pairs()) {
    os << (first ? "" : ",") << a << ":" << n;
    first = false;
  }
  if (compose_) os << ",compose=" << *compose_;
  if (twist_) os << ",twist=" << twist_->order << ":" << twist_->exponent;
  return os.str();
}

namespace {

struct Cursor {
  const std::string& text;
  std::size_t pos = 0;

  [[noreturn]] void fail(const std::string& what) const {
    throw DomainError("omega: " + what + " at position " + std::to_string(pos));
  }

  i64 integer() {
    const char* begin = text.data() + pos;
    const char* end = text.data() + text.size();
    if (begin != end && *begin == '+') ++begin;
    i64 v = 0;
    auto [ptr, ec] = std::from_chars(begin, end, v);
    if (ec != std::errc() || ptr == begin) fail("expected an integer");
    pos = static_cast<std::size_t>(ptr - text.data());
    return v;
  }

  void expect(char c) {
    if (pos >= text.size() || text[pos] != c) fail(std::string("expected '") + c + "'");
    ++pos;
  }

  bool consume(const std::string& word) {
    if (text.compare(pos, word.size(), word) != 0) return false;
    pos += word.size();
    return true;
  }

  bool done() const { return pos >= text.size(); }
};

}  // namespace

EulerSystem EulerSystem::parse(const std::string& text) {
  Cursor cur{text};
  std::vector<std::pair<i64, i64>> pairs;
  std::optional<i64> compose;
  std::optional<RootOfUnity> twist;
  while (true) {
    if (cur.consume("compose=")) {
      if (compose) cur.fail("duplicate compose");
      compose = cur.integer();
    } else if (cur.consume("twist=")) {
      if (twist) cur.fail("duplicate twist");
      const i64 h = cur.integer();
      cur.expect(':');
      const i64 e = cur.integer();
      if (h <= 0) cur.fail("twist order must be positive");
      twist = RootOfUnity(static_cast<u64>(h), e);
    } else {
      if (compose || twist) cur.fail("(a:n) pair after a decoration");
      const i64 a = cur.integer();
      cur.expect(':');
      const i64 n = cur.integer();
      pairs.emplace_back(a, n);
    }
    if (cur.done()) break;
    cur.expect(',');
  }
  return EulerSystem(OmegaSpec(std::move(pairs)), compose, twist);
}

// ---------------------------------------------------------------------------
// Evaluation

namespace {

// lambda_Omega(zeta_L^e) in Q(zeta_L), with the eta = 1 limit.
CycloElt lambda_at(const OmegaSpec& om, const FieldPtr& f, u64 e) {
  const u64 L = f->conductor();
  if (e % L == 0) return CycloElt::from_rational(f, om.value_at_one());
  CycloElt result = CycloElt::from_rational(f, 1);
  for (auto [a, n] : om.pairs()) {
    if (n == 0) continue;
    const u64 ae = mulmod(mod_floor(a, L), e, L);
    const i64 aes = static_cast<i64>(ae);
    if (mulmod(2, ae, L) == 0) throw ArithmeticError("phi: lambda_Omega has a zero factor at eta");
    if (n > 0) {
      CycloElt factor = CycloElt::root_of_unity(f, -aes) - CycloElt::root_of_unity(f, aes);
      result *= pow(factor, n);
    } else {
      // (T^-a - T^a)^-1 = T^a / (1 - T^2a)
      CycloElt inv = CycloElt::root_of_unity(f, aes) * inverse_one_minus_root(f, 2 * aes);
      result *= pow(inv, -n);
    }
  }
  return result;
}

RootOfUnity normalized(const RootOfUnity& eta) {
  const u64 N = eta.exact_order();
  return RootOfUnity(N, static_cast<i64>(eta.exponent / (eta.order / N)));
}

void require_in_ws(const EulerSystem& E, u64 N) {
  if (!E.admits_order(N)) {
    throw DomainError("eta outside W_S: order " + std::to_string(N) + " meets S");
  }
}

void require_aux_prime(const EulerSystem& E, u64 q) {
  if (!is_prime(q)) throw DomainError("auxiliary prime " + std::to_string(q) + " is not prime");
  const auto& S = E.excluded_primes();
  if (std::binary_search(S.begin(), S.end(), q)) {
    throw DomainError("auxiliary prime " + std::to_string(q) + " lies in S");
  }
}

std::string root_name(const RootOfUnity& eta) {
  if (eta.is_one()) return "1";
  return "zeta_" + std::to_string(eta.order) + "^" + std::to_string(eta.exponent);
}

// Descends x to Q(zeta_target) when possible so witnesses stay small.
CycloElt compact(const CycloElt& x, u64 target) {
  try {
    return descend(x, target);
  } catch (const DomainError&) {
    return x;
  }
}

std::string pass_fail(bool ok) { return ok ? "pass" : "fail"; }

}  // namespace

CycloElt phi_in(const EulerSystem& E, u64 L, i64 e) {
  if (L == 0) throw DomainError("phi: ambient conductor must be positive");
  const u64 ex = mod_floor(e, L);
  require_in_ws(E, L / gcd(L, ex));
  const FieldPtr f = cyclotomic_field(L);
  auto composed = [&](u64 x) {
    if (E.compose_n()) x = mulmod(x, mod_floor(*E.compose_n(), L), L);
    return lambda_at(E.base(), f, x);
  };
  const u64 h = E.twist_order();
  if (h == 1) return composed(ex);
  if (L % h != 0) throw DomainError("phi: twist order must divide the ambient conductor");
  const u64 xi = E.twist()->exponent_in(L);
  CycloElt result = CycloElt::from_rational(f, 1);
  for (u64 tau : unit_residues(h)) result *= composed((ex + mulmod(tau, xi, L)) % L);
  return result;
}

CycloElt phi_eval(const EulerSystem& E, const RootOfUnity& eta) {
  require_in_ws(E, eta.exact_order());
  const u64 L = lcm(eta.order, E.twist_order());
  CycloElt v = phi_in(E, L, static_cast<i64>(eta.exponent_in(L)));
  try {
    v = descend(v, eta.order);
  } catch (const DomainError&) {
    throw InternalInconsistency("phi value does not lie in Q(zeta_" + std::to_string(eta.order) + ")");
  }
  if (!is_in_real_subfield(v)) throw InternalInconsistency("phi value is not real");
  return v;
}

Witness make_witness(std::string label, const CycloElt& x) {
  return Witness{std::move(label), x.conductor(), x.to_strings()};
}

// ---------------------------------------------------------------------------
// Axiom checks

AxiomReport check_equivariance(const EulerSystem& E, const RootOfUnity& eta_in, i64 a) {
  const RootOfUnity eta = normalized(eta_in);
  const u64 N = eta.order;
  require_in_ws(E, N);
  const u64 ar = mod_floor(a, N);
  if (N > 1 && gcd(ar, N) != 1) throw DomainError("equivariance: a is not coprime to the order of eta");

  AxiomReport r;
  r.check = "equivariance";
  r.params = {{"eta", root_name(eta)}, {"a", std::to_string(a)}};
  const CycloElt v = phi_eval(E, eta);
  const CycloElt lhs = phi_eval(E, RootOfUnity(N, static_cast<i64>(mulmod(eta.exponent, ar, N))));
  const CycloElt rhs = galois_apply(N == 1 ? 0 : ar, v);
  const CycloElt inv = phi_eval(E, RootOfUnity(N, -static_cast<i64>(eta.exponent)));
  const bool equivariant = lhs == rhs;
  const bool symmetric = inv == v;
  r.pass = equivariant && symmetric;
  r.witness = {make_witness("phi(eta^a)", lhs), make_witness("sigma_a(phi(eta))", rhs),
               make_witness("phi(eta^-1)", inv)};
  r.details = {{"equivariance", pass_fail(equivariant)}, {"inverse_symmetry", pass_fail(symmetric)}};
  return r;
}

AxiomReport check_distribution(const EulerSystem& E, const RootOfUnity& eta_in, u64 q) {
  const RootOfUnity eta = normalized(eta_in);
  require_aux_prime(E, q);
  require_in_ws(E, eta.order);
  const u64 N = eta.order;
  const u64 L = lcm(q * N, E.twist_order());
  const i64 e = static_cast<i64>(eta.exponent_in(L));
  const i64 step = static_cast<i64>(L / q);

  AxiomReport r;
  r.check = "distribution";
  r.params = {{"eta", root_name(eta)}, {"q", std::to_string(q)}};
  CycloElt lhs = CycloElt::from_rational(cyclotomic_field(L), 1);
  for (u64 k = 0; k < q; ++k) lhs *= phi_in(E, L, e + static_cast<i64>(k) * step);
  const RootOfUnity eta_q(N, static_cast<i64>(mulmod(eta.exponent, q % N, N)));
  const CycloElt rhs_small = phi_eval(E, eta_q);
  r.pass = lhs == embed_up(rhs_small, L);
  r.witness = {make_witness("prod phi(zeta eta)", compact(lhs, N)), make_witness("phi(eta^q)", rhs_small)};
  r.details = {{"ambient_conductor", std::to_string(L)}};
  return r;
}

AxiomReport check_congruence(const EulerSystem& E, const RootOfUnity& eta_in, u64 q) {
  const RootOfUnity eta = normalized(eta_in);
  require_aux_prime(E, q);
  require_in_ws(E, eta.order);
  const u64 N = eta.order;
  if (N % q == 0) throw DomainError("congruence: order of eta must be prime to q");
  const u64 Lp = lcm(N, E.twist_order());
  const u64 L = q * Lp;
  const i64 e = static_cast<i64>(eta.exponent_in(L));

  AxiomReport r;
  r.check = "congruence";
  r.params = {{"eta", root_name(eta)}, {"q", std::to_string(q)}};
  const CycloElt at_zeta = phi_in(E, L, e + static_cast<i64>(Lp));
  const CycloElt at_one = phi_in(E, L, e);
  const CycloElt delta = at_zeta - at_one;
  if (mpz_divisible_ui_p(delta.denominator().get_mpz_t(), q)) throw ArithmeticError("non-integral test value");

  // The prime above q: zeta_L -> rho^y with rho of order L' in F_{q^f}, y = q^-1 mod L'.
  const unsigned f = Lp == 1 ? 1 : static_cast<unsigned>(multiplicative_order(q % Lp, Lp));
  const FiniteField F = FiniteField::with_degree(q, f);
  const FiniteField::Elt rho = F.element_of_order(Lp);
  const u64 y = Lp == 1 ? 0 : invmod(q % Lp, Lp);
  const FiniteField::Elt g = F.pow(rho, y);
  std::vector<FiniteField::Elt> powers(L);
  powers[0] = F.one();
  for (u64 j = 1; j < L; ++j) powers[j] = F.mul(powers[j - 1], g);

  std::vector<u64> red;
  for (const auto& c : delta.numerators()) {
    red.push_back(mpz_fdiv_ui(c.get_mpz_t(), q));
  }
  u64 nonzero = 0, checked = 0;
  for (u64 a : unit_residues(L)) {
    FiniteField::Elt acc = F.zero();
    for (u64 k = 0; k < red.size(); ++k) {
      if (red[k] != 0) acc = F.add(acc, F.scale(powers[mulmod(a, k, L)], red[k]));
    }
    ++checked;
    if (!F.is_zero(acc)) ++nonzero;
  }
  r.pass = nonzero == 0;
  r.witness = {make_witness("phi(zeta eta)", at_zeta), make_witness("phi(eta)", at_one)};
  r.details = {{"residue_field", std::to_string(q) + "^" + std::to_string(f)},
               {"conjugates_checked", std::to_string(checked)},
               {"nonzero_residues", std::to_string(nonzero)}};
  return r;
}

AxiomReport check_frobenius_norm(const EulerSystem& E, u64 m, u64 q) {
  if (m <= 1) throw DomainError("Frobenius norm relation excludes eta = 1");
  require_in_ws(E, m);
  require_aux_prime(E, q);
  if (m % q == 0) throw DomainError("Frobenius norm relation needs q prime to m");
  const u64 L = lcm(m * q, E.twist_order());

  AxiomReport r;
  r.check = "frobenius_norm";
  r.params = {{"m", std::to_string(m)}, {"q", std::to_string(q)}};
  const CycloElt x = phi_in(E, L, static_cast<i64>(L / m + L / q));
  const FieldPtr f = cyclotomic_field(L);
  std::vector<GaloisElt> H;
  for (u64 a : f->unit_group()) {
    if (a % (L / q) == 1 % (L / q)) H.emplace_back(f, static_cast<i64>(a));
  }
  const CycloElt lhs = relative_norm(x, H);
  const CycloElt v = phi_eval(E, RootOfUnity(m, 1));
  const CycloElt rhs = galois_apply(q % m, v) * elt_inverse(v);
  r.pass = lhs == embed_up(rhs, L);
  r.witness = {make_witness("norm phi(zeta_q eta)", compact(lhs, m)), make_witness("phi(eta)^(Frob_q-1)", rhs)};
  r.details = {{"frobenius", "sigma_" + std::to_string(q % m)},
               {"frobenius_trivial", q % m == 1 ? "true" : "false"},
               {"subgroup_order", std::to_string(H.size())}};
  return r;
}

AxiomReport check_tower_norm(const EulerSystem& E, u64 p, unsigned n) {
  if (p == 2 || !is_prime(p)) throw DomainError("tower norm: p must be an odd prime");
  require_aux_prime(E, p);
  u64 top = p;
  for (unsigned i = 0; i <= n; ++i) top *= p;
  const u64 below = top / p;
  const u64 L = lcm(top, E.twist_order());

  AxiomReport r;
  r.check = "tower_norm";
  r.params = {{"p", std::to_string(p)}, {"n", std::to_string(n)}};
  const CycloElt x = phi_in(E, L, static_cast<i64>(L / top));
  const FieldPtr f = cyclotomic_field(L);
  std::vector<GaloisElt> H;
  for (u64 a : f->unit_group()) {
    if (a % (L / p) == 1 % (L / p)) H.emplace_back(f, static_cast<i64>(a));
  }
  const CycloElt lhs = relative_norm(x, H);
  const CycloElt rhs = phi_eval(E, RootOfUnity(below, 1));
  r.pass = lhs == embed_up(rhs, L);
  r.witness = {make_witness("norm phi(zeta_{n+1})", compact(lhs, below)), make_witness("phi(zeta_n)", rhs)};
  r.details = {{"ambient_conductor", std::to_string(L)}, {"subgroup_order", std::to_string(H.size())}};
  return r;
}

AxiomReport check_unit(const EulerSystem& E, const RootOfUnity& eta_in) {
  const RootOfUnity eta = normalized(eta_in);
  if (eta.is_one()) throw DomainError("unit check excludes eta = 1: phi(1) need not be a unit");
  AxiomReport r;
  r.check = "unit";
  r.params = {{"eta", root_name(eta)}};
  const CycloElt x = phi_eval(E, eta);
  const QPoly mp = minimal_polynomial(x);
  const bool integral = std::all_of(mp.coeffs().begin(), mp.coeffs().end(),
                                    [](const Rational& c) { return c.get_den() == 1; });
  const Rational norm = absolute_norm(x);
  Rational own_norm = mp.coeff(0);
  if (mp.degree() % 2 != 0) own_norm = -own_norm;
  r.pass = integral && (norm == 1 || norm == -1);
  r.witness = {make_witness("phi(eta)", x)};
  r.details = {{"minimal_polynomial", mp.to_string()},
               {"integral", integral ? "true" : "false"},
               {"absolute_norm", norm.get_str()},
               {"norm_from_own_field", own_norm.get_str()}};
  return r;
}

// ---------------------------------------------------------------------------
// Decomposition over cyclotomic units

std::vector<u64> cyclotomic_unit_indices(u64 p, unsigned n) {
  u64 N = p;
  for (unsigned i = 0; i < n; ++i) N *= p;
  std::vector<u64> out;
  for (u64 a = 2; 2 * a < N; ++a) {
    if (a % p != 0) out.push_back(a);
  }
  return out;
}

CycloElt cyclotomic_unit(const FieldPtr& field, u64 a) {
  const u64 N = field->conductor();
  if (N % 2 == 0) throw DomainError("cyclotomic_unit: conductor must be odd");
  // (1 - zeta^a) / (1 - zeta) = 1 + zeta + ... + zeta^(a-1)
  std::vector<Integer> geo(a, 1);
  const CycloElt sum(field, std::move(geo));
  const u64 shift = mulmod(mod_floor(1 - static_cast<i64>(a), N), invmod(2, N), N);
  return CycloElt::root_of_unity(field, static_cast<i64>(shift)) * sum;
}

namespace {

namespace mp = boost::multiprecision;
using Real = mp::number<mp::mpfr_float_backend<0>, mp::et_off>;
using RealMatrix = Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic>;
using RealVector = Eigen::Matrix<Real, Eigen::Dynamic, 1>;

class PrecisionScope {
 public:
  explicit PrecisionScope(unsigned bits) : saved_(Real::default_precision()) {
    Real::default_precision(bits * 30103 / 100000 + 2);
  }
  ~PrecisionScope() { Real::default_precision(saved_); }

 private:
  unsigned saved_;
};

Real to_real(const Integer& z) { return Real(z.get_str()); }

// log |sigma_b(x)| for a real x of Q(zeta_N).
Real log_abs_embedding(const CycloElt& x, u64 b, const std::vector<Real>& cosines) {
  const u64 N = x.conductor();
  Real acc = 0;
  const auto& num = x.numerators();
  for (u64 k = 0; k < num.size(); ++k) {
    if (num[k] != 0) acc += to_real(num[k]) * cosines[mulmod(b, k, N)];
  }
  acc /= to_real(x.denominator());
  return log(abs(acc));
}

CycloElt inverse_cyclotomic_unit(const FieldPtr& field, u64 a) {
  const u64 N = field->conductor();
  const u64 shift = mulmod(mod_floor(1 - static_cast<i64>(a), N), invmod(2, N), N);
  // (1 - zeta) / (1 - zeta^a), times zeta^-shift
  const CycloElt one_minus = CycloElt::from_rational(field, 1) - CycloElt::root_of_unity(field, 1);
  return CycloElt::root_of_unity(field, -static_cast<i64>(shift)) * one_minus *
         inverse_one_minus_root(field, static_cast<i64>(a));
}

}  // namespace

Decomposition decompose_over_cyclotomic_units(const CycloElt& u_in, u64 p, unsigned n) {
  if (p == 2 || !is_prime(p)) throw DomainError("decompose: p must be an odd prime");
  u64 N = p;
  for (unsigned i = 0; i < n; ++i) N *= p;
  if (u_in.conductor() % N != 0) throw DomainError("decompose: element does not lie in Q(zeta_" + std::to_string(N) + ")");
  const CycloElt u = descend(u_in, N);
  if (!is_in_real_subfield(u)) throw DomainError("decompose: element is not real");
  const Rational norm = absolute_norm(u);
  if (norm != 1 && norm != -1) throw DomainError("decompose: element is not a unit (norm " + norm.get_str() + ")");

  const FieldPtr f = u.field();
  Decomposition out;
  out.conductor = N;
  out.generators = cyclotomic_unit_indices(p, n);
  const std::size_t r = out.generators.size();
  std::vector<CycloElt> gens, gen_invs;
  for (u64 a : out.generators) {
    gens.push_back(cyclotomic_unit(f, a));
    gen_invs.push_back(inverse_cyclotomic_unit(f, a));
  }
  // Real places sigma_b, b < N/2, b != 1 (the dropped place is dependent).
  std::vector<u64> places;
  for (u64 b = 2; 2 * b < N; ++b) {
    if (b % p != 0) places.push_back(b);
  }

  for (unsigned bits = 128; bits <= 2048; bits *= 2) {
    PrecisionScope scope(bits);
    std::vector<i64> e(r, 0);
    bool rounded = true;
    if (r > 0) {
      const Real two_pi = 2 * boost::math::constants::pi<Real>();
      std::vector<Real> cosines(N);
      for (u64 j = 0; j < N; ++j) cosines[j] = cos(two_pi * Real(j) / Real(N));
      RealMatrix A(r, r);
      RealVector rhs(r);
      for (std::size_t i = 0; i < r; ++i) {
        for (std::size_t j = 0; j < r; ++j) A(i, j) = log_abs_embedding(gens[j], places[i], cosines);
        rhs(i) = log_abs_embedding(u, places[i], cosines);
      }
      const RealVector sol = A.fullPivLu().solve(rhs);
      for (std::size_t j = 0; j < r; ++j) {
        const Real rj = round(sol(j));
        if (abs(sol(j) - rj) > Real(0.25) || abs(rj) > Real(1L << 30)) rounded = false;
        e[j] = rj.convert_to<long>();
      }
    }
    if (!rounded) continue;
    CycloElt rest = u;
    for (std::size_t j = 0; j < r; ++j) {
      if (e[j] > 0) rest *= pow(gen_invs[j], e[j]);
      if (e[j] < 0) rest *= pow(gens[j], -e[j]);
    }
    for (u64 k = 0; k < N; ++k) {
      const CycloElt root = CycloElt::root_of_unity(f, static_cast<i64>(k));
      int sign = 0;
      if (rest == root) sign = 1;
      else if (rest == -root) sign = -1;
      if (sign == 0) continue;
      out.exponents.assign(e.begin(), e.end());
      out.sign = sign;
      out.root_exponent = k;
      out.precision_bits = bits;
      // Independent exact re-multiplication.
      CycloElt check = CycloElt::root_of_unity(f, static_cast<i64>(k)) * Rational(sign);
      for (std::size_t j = 0; j < r; ++j) check *= e[j] >= 0 ? pow(gens[j], e[j]) : pow(gen_invs[j], -e[j]);
      out.verified = check == u;
      if (!out.verified) throw InternalInconsistency("decomposition failed to re-multiply");
      return out;
    }
  }
  throw BudgetError("decomposition not found");
}

}  // namespace kforge

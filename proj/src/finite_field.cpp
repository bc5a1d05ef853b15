#include "kforge/finite_field.hpp"

#include <algorithm>
#include <sstream>
#include <unordered_map>

#include "kforge/error.hpp"

namespace kforge {

namespace {

using Vec = std::vector<u64>;

void trim(Vec& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

// r = a mod m over F_ell, m monic.
Vec poly_rem(Vec a, const Vec& m, u64 ell) {
  trim(a);
  const std::size_t dm = m.size() - 1;
  while (a.size() > dm) {
    u64 c = a.back();
    std::size_t shift = a.size() - 1 - dm;
    if (c != 0) {
      for (std::size_t j = 0; j <= dm; ++j) {
        a[shift + j] = (a[shift + j] + ell - mulmod(c, m[j], ell)) % ell;
      }
    }
    a.pop_back();
    trim(a);
  }
  return a;
}

Vec poly_mul(const Vec& a, const Vec& b, u64 ell) {
  if (a.empty() || b.empty()) return {};
  Vec r(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0) continue;
    for (std::size_t j = 0; j < b.size(); ++j) r[i + j] = (r[i + j] + mulmod(a[i], b[j], ell)) % ell;
  }
  trim(r);
  return r;
}

Vec make_monic(Vec a, u64 ell) {
  trim(a);
  if (a.empty()) return a;
  u64 inv = invmod(a.back(), ell);
  for (auto& x : a) x = mulmod(x, inv, ell);
  return a;
}

Vec poly_gcd(Vec a, Vec b, u64 ell) {
  trim(a);
  trim(b);
  while (!b.empty()) {
    Vec bm = make_monic(b, ell);
    Vec r = poly_rem(a, bm, ell);
    a = std::move(bm);
    b = std::move(r);
  }
  return make_monic(a, ell);
}

bool is_irreducible(const Vec& g, u64 ell) {
  const std::size_t f = g.size() - 1;
  if (f == 1) return true;
  // x^(ell^k) - x must be coprime to g for every k < f.
  Vec xpow = poly_rem(Vec{0, 1}, g, ell);
  for (std::size_t k = 1; k < f; ++k) {
    // xpow <- xpow^ell mod g
    Vec base = xpow, acc{1};
    u64 e = ell;
    while (e > 0) {
      if (e & 1) acc = poly_rem(poly_mul(acc, base, ell), g, ell);
      base = poly_rem(poly_mul(base, base, ell), g, ell);
      e >>= 1;
    }
    xpow = acc;
    Vec diff = xpow;
    if (diff.size() < 2) diff.resize(2, 0);
    diff[1] = (diff[1] + ell - 1) % ell;
    trim(diff);
    if (diff.empty()) return false;
    Vec d = poly_gcd(g, diff, ell);
    if (d.size() > 1) return false;
  }
  return true;
}

}  // namespace

FiniteField::FiniteField(u64 ell, std::vector<u64> modulus) : ell_(ell), modulus_(std::move(modulus)) {
  if (!is_prime(ell_)) throw DomainError("FiniteField: characteristic " + std::to_string(ell_) + " is not prime");
  for (auto& c : modulus_) c %= ell_;
  trim(modulus_);
  if (modulus_.size() < 2 || modulus_.back() != 1) throw DomainError("FiniteField: modulus must be monic of degree >= 1");
  f_ = static_cast<unsigned>(modulus_.size() - 1);
  if (!is_irreducible(modulus_, ell_)) throw DomainError("FiniteField: modulus is reducible");
  mpz_ui_pow_ui(group_order_.get_mpz_t(), ell_, f_);
  group_order_ -= 1;
}

FiniteField FiniteField::prime_field(u64 ell) { return FiniteField(ell, {0, 1}); }

FiniteField FiniteField::with_degree(u64 ell, unsigned f) {
  if (f == 0) throw DomainError("FiniteField::with_degree: degree must be positive");
  if (f == 1) return prime_field(ell);
  if (!is_prime(ell)) throw DomainError("FiniteField: characteristic not prime");
  // Enumerate monic polynomials of degree f in lexicographic order of the
  // lower coefficients, constant term nonzero.
  Vec g(f + 1, 0);
  g[f] = 1;
  while (true) {
    if (g[0] != 0 && is_irreducible(g, ell)) return FiniteField(ell, g);
    std::size_t i = 0;
    while (i < f) {
      if (++g[i] < ell) break;
      g[i] = 0;
      ++i;
    }
    if (i == f) throw InternalInconsistency("no irreducible polynomial found");
  }
}

FiniteField::Elt FiniteField::from_int(i64 a) const {
  Elt r(f_, 0);
  r[0] = mod_floor(a, ell_);
  return r;
}

FiniteField::Elt FiniteField::generator_x() const {
  Elt r(f_, 0);
  if (f_ == 1) {
    r[0] = (ell_ - modulus_[0]) % ell_;
  } else {
    r[1] = 1;
  }
  return r;
}

bool FiniteField::is_zero(const Elt& a) const {
  return std::all_of(a.begin(), a.end(), [](u64 x) { return x == 0; });
}

FiniteField::Elt FiniteField::add(const Elt& a, const Elt& b) const {
  Elt r(f_);
  for (unsigned i = 0; i < f_; ++i) r[i] = (a[i] + b[i]) % ell_;
  return r;
}

FiniteField::Elt FiniteField::sub(const Elt& a, const Elt& b) const {
  Elt r(f_);
  for (unsigned i = 0; i < f_; ++i) r[i] = (a[i] + ell_ - b[i]) % ell_;
  return r;
}

FiniteField::Elt FiniteField::neg(const Elt& a) const { return sub(zero(), a); }

FiniteField::Elt FiniteField::mul(const Elt& a, const Elt& b) const {
  if (f_ == 1) return {mulmod(a[0], b[0], ell_)};
  Vec r = poly_rem(poly_mul(a, b, ell_), modulus_, ell_);
  r.resize(f_, 0);
  return r;
}

FiniteField::Elt FiniteField::scale(const Elt& a, u64 s) const {
  Elt r(f_);
  for (unsigned i = 0; i < f_; ++i) r[i] = mulmod(a[i], s % ell_, ell_);
  return r;
}

FiniteField::Elt FiniteField::pow(const Elt& a, const Integer& e) const {
  if (e < 0) return pow(inv(a), Integer(-e));
  Elt result = one(), base = a;
  const std::size_t bits = mpz_sizeinbase(e.get_mpz_t(), 2);
  for (std::size_t i = 0; i < bits; ++i) {
    if (mpz_tstbit(e.get_mpz_t(), i)) result = mul(result, base);
    if (i + 1 < bits) base = mul(base, base);
  }
  return result;
}

FiniteField::Elt FiniteField::inv(const Elt& a) const {
  if (is_zero(a)) throw ArithmeticError("division by zero in finite field");
  return pow(a, Integer(group_order_ - 1));
}

FiniteField::Elt FiniteField::element_of_order(u64 n) const {
  const Integer nz(static_cast<unsigned long>(n));
  if (n == 0 || !mpz_divisible_p(group_order_.get_mpz_t(), nz.get_mpz_t())) {
    throw DomainError("element_of_order: " + std::to_string(n) + " does not divide the group order");
  }
  const Integer cofactor = group_order_ / nz;
  const auto ps = prime_divisors(n);
  // Enumerate candidates 1, x, x+1, ... in base-ell digit order.
  Elt cand(f_, 0);
  while (true) {
    if (!is_zero(cand)) {
      Elt z = pow(cand, cofactor);
      bool exact = true;
      for (u64 p : ps) {
        if (pow(z, n / p) == one()) {
          exact = false;
          break;
        }
      }
      if (exact) return z;
    }
    unsigned i = 0;
    while (i < f_) {
      if (++cand[i] < ell_) break;
      cand[i] = 0;
      ++i;
    }
    if (i == f_) throw InternalInconsistency("element_of_order exhausted the field");
  }
}

std::string FiniteField::to_string(const Elt& a) const {
  if (f_ == 1) return std::to_string(a[0]);
  std::ostringstream os;
  os << "[";
  for (unsigned i = 0; i < f_; ++i) os << (i ? "," : "") << a[i];
  os << "]";
  return os.str();
}

std::vector<Integer> prime_divisors_big(const Integer& n_in) {
  if (n_in <= 0) throw DomainError("prime_divisors_big: nonpositive input");
  std::vector<Integer> out;
  Integer n = n_in;
  for (unsigned long p = 2; p < (1UL << 22); p += (p == 2 ? 1 : 2)) {
    if (Integer(p) * p > n) break;
    if (mpz_divisible_ui_p(n.get_mpz_t(), p)) {
      out.emplace_back(p);
      while (mpz_divisible_ui_p(n.get_mpz_t(), p)) mpz_divexact_ui(n.get_mpz_t(), n.get_mpz_t(), p);
    }
  }
  if (n > 1) {
    if (mpz_probab_prime_p(n.get_mpz_t(), 40) == 0) throw BudgetError("prime_divisors_big: cofactor too large to factor");
    out.push_back(n);
  }
  return out;
}

Integer ff_element_order(const FiniteField& field, const FiniteField::Elt& g) {
  if (field.is_zero(g)) throw ArithmeticError("element order of zero");
  Integer ord = field.group_order();
  for (const auto& p : prime_divisors_big(ord)) {
    while (mpz_divisible_p(ord.get_mpz_t(), p.get_mpz_t()) && field.pow(g, Integer(ord / p)) == field.one()) {
      ord /= p;
    }
  }
  return ord;
}

namespace {

struct EltHash {
  std::size_t operator()(const FiniteField::Elt& e) const {
    std::size_t h = 1469598103934665603ULL;
    for (u64 x : e) h = (h ^ x) * 1099511628211ULL;
    return h;
  }
};

}  // namespace

Integer ff_discrete_log(const FiniteField& field, const FiniteField::Elt& g, const FiniteField::Elt& w) {
  if (field.is_zero(w)) throw ArithmeticError("not in cyclic span");
  const Integer order = ff_element_order(field, g);
  if (order < 10000) {
    FiniteField::Elt acc = field.one();
    for (unsigned long e = 0; e < order.get_ui(); ++e) {
      if (acc == w) return Integer(e);
      acc = field.mul(acc, g);
    }
    throw ArithmeticError("not in cyclic span");
  }
  if (!order.fits_ulong_p()) throw BudgetError("discrete log: subgroup order too large");
  const unsigned long n = order.get_ui();
  unsigned long m = 1;
  while (m * m < n) ++m;
  std::unordered_map<FiniteField::Elt, unsigned long, EltHash> baby;
  baby.reserve(m);
  FiniteField::Elt acc = field.one();
  for (unsigned long j = 0; j < m; ++j) {
    baby.emplace(acc, j);  // keeps the smallest j
    acc = field.mul(acc, g);
  }
  const FiniteField::Elt giant = field.inv(field.pow(g, Integer(m)));
  FiniteField::Elt gamma = w;
  for (unsigned long i = 0; i < m; ++i) {
    auto it = baby.find(gamma);
    if (it != baby.end()) {
      unsigned long e = i * m + it->second;
      if (e < n) return Integer(e);
    }
    gamma = field.mul(gamma, giant);
  }
  throw ArithmeticError("not in cyclic span");
}

}  // namespace kforge

#pragma once

// Independent reference implementations for the unit tests. Nothing here
// calls into the library beyond reading element coefficients.

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <vector>

#include "kforge/cyclotomic.hpp"

namespace oracle {

using kforge::i64;
using kforge::Integer;
using kforge::Rational;
using kforge::u64;
using Cx = std::complex<long double>;

inline u64 gcd(u64 a, u64 b) {
  while (b) {
    a %= b;
    std::swap(a, b);
  }
  return a;
}

inline bool is_prime(u64 n) {
  if (n < 2) return false;
  for (u64 d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

inline u64 totient(u64 n) {
  u64 c = 0;
  for (u64 k = 1; k <= n; ++k)
    if (gcd(k, n) == 1) ++c;
  return c;
}

inline int mobius(u64 n) {
  int mu = 1;
  for (u64 d = 2; d <= n; ++d) {
    if (n % d) continue;
    n /= d;
    if (n % d == 0) return 0;
    mu = -mu;
  }
  return mu;
}

inline u64 pow_mod(u64 b, u64 e, u64 m) {
  u64 r = 1 % m;
  for (u64 i = 0; i < e; ++i) r = static_cast<u64>((unsigned __int128)r * b % m);
  return r;
}

/// Smallest k >= 0 with g^k = w mod q by scanning, or -1.
inline i64 dlog_scan(u64 g, u64 w, u64 q) {
  u64 x = 1 % q;
  for (u64 k = 0; k < q; ++k) {
    if (x == w % q) return static_cast<i64>(k);
    x = static_cast<u64>((unsigned __int128)x * g % q);
  }
  return -1;
}

// Dense polynomials over Q, lowest degree first, no normalisation beyond trimming.
using QVec = std::vector<Rational>;

inline void trim(QVec& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

inline QVec mul(const QVec& a, const QVec& b) {
  if (a.empty() || b.empty()) return {};
  QVec r(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
  trim(r);
  return r;
}

inline std::pair<QVec, QVec> divmod(QVec a, const QVec& b) {
  trim(a);
  if (a.size() < b.size()) return {{}, a};
  QVec q(a.size() - b.size() + 1, 0);
  for (std::size_t k = q.size(); k-- > 0;) {
    q[k] = a[k + b.size() - 1] / b.back();
    for (std::size_t j = 0; j < b.size(); ++j) a[k + j] -= q[k] * b[j];
  }
  a.resize(b.size() - 1);
  trim(a);
  trim(q);
  return {q, a};
}

inline QVec x_pow_minus_one(u64 d) {
  QVec v(d + 1, 0);
  v[0] = -1;
  v[d] = 1;
  return v;
}

/// Phi_m from the Moebius product prod_{d | m} (x^d - 1)^mu(m/d).
inline QVec cyclotomic_mobius(u64 m) {
  QVec num{1}, den{1};
  for (u64 d = 1; d <= m; ++d) {
    if (m % d) continue;
    const int mu = mobius(m / d);
    if (mu == 1) num = mul(num, x_pow_minus_one(d));
    if (mu == -1) den = mul(den, x_pow_minus_one(d));
  }
  return divmod(num, den).first;
}

inline QVec coeffs_of(const kforge::CycloElt& x) {
  QVec v = x.coeffs();
  trim(v);
  return v;
}

/// Product of two elements of Q(zeta_m) by schoolbook multiplication and long division by Phi_m.
inline QVec naive_product(const kforge::CycloElt& a, const kforge::CycloElt& b) {
  return divmod(mul(coeffs_of(a), coeffs_of(b)), cyclotomic_mobius(a.conductor())).second;
}

/// The embedding zeta_m -> exp(2 pi i k / m).
inline Cx embed(const kforge::CycloElt& x, u64 k) {
  const long double two_pi = 2.0L * std::acos(-1.0L);
  const u64 m = x.conductor();
  Cx acc = 0;
  const auto c = x.coeffs();
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (c[i] == 0) continue;
    const long double ang = two_pi * static_cast<long double>((i * k) % m) / static_cast<long double>(m);
    acc += static_cast<long double>(c[i].get_d()) * Cx(std::cos(ang), std::sin(ang));
  }
  return acc;
}

inline Cx root(u64 N, i64 e) {
  const long double two_pi = 2.0L * std::acos(-1.0L);
  const long double ang = two_pi * static_cast<long double>(((e % (i64)N) + (i64)N) % (i64)N) / N;
  return Cx(std::cos(ang), std::sin(ang));
}

/// Numerical value of prod_j (eta^-a_j - eta^a_j)^n_j at eta = exp(2 pi i e / N), eta != 1.
inline Cx lambda_numeric(const std::vector<std::pair<i64, i64>>& omega, u64 N, i64 e) {
  Cx acc = 1;
  for (auto [a, n] : omega) {
    const Cx f = root(N, -a * e) - root(N, a * e);
    acc *= std::pow(f, static_cast<long double>(n));
  }
  return acc;
}

/// Generators of random test data.
class Gen {
 public:
  explicit Gen(u64 seed) : rng_(seed) {}

  i64 range(i64 lo, i64 hi) { return std::uniform_int_distribution<i64>(lo, hi)(rng_); }
  u64 urange(u64 lo, u64 hi) { return std::uniform_int_distribution<u64>(lo, hi)(rng_); }

  kforge::CycloElt element(const kforge::FieldPtr& f, i64 bound = 5, i64 max_den = 3) {
    std::vector<Integer> num(f->degree());
    for (auto& c : num) c = range(-bound, bound);
    return kforge::CycloElt(f, std::move(num), Integer(range(1, max_den)));
  }

  kforge::CycloElt nonzero(const kforge::FieldPtr& f, i64 bound = 5) {
    for (;;) {
      auto x = element(f, bound);
      if (!x.is_zero()) return x;
    }
  }

  u64 unit_mod(u64 m) {
    for (;;) {
      const u64 a = urange(1, m);
      if (gcd(a, m) == 1) return a % m;
    }
  }

 private:
  std::mt19937_64 rng_;
};

}  // namespace oracle

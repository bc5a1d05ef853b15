#include "kforge/ntheory.hpp"

#include "kforge/error.hpp"

namespace kforge {

std::string to_string(const Integer& x) { return x.get_str(); }

std::string to_string(const Rational& x) { return x.get_str(); }

bool is_prime(u64 n) {
  if (n < 2) return false;
  for (u64 p : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
    if (n % p == 0) return n == p;
  }
  // Deterministic Miller-Rabin for 64-bit inputs.
  u64 d = n - 1;
  unsigned s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  for (u64 a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
    u64 x = powmod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (unsigned r = 1; r < s; ++r) {
      x = mulmod(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

std::vector<std::pair<u64, unsigned>> factorize(u64 n) {
  std::vector<std::pair<u64, unsigned>> out;
  if (n < 2) return out;
  for (u64 p = 2; p * p <= n; p += (p == 2 ? 1 : 2)) {
    if (n % p != 0) continue;
    unsigned e = 0;
    while (n % p == 0) {
      n /= p;
      ++e;
    }
    out.emplace_back(p, e);
  }
  if (n > 1) out.emplace_back(n, 1);
  return out;
}

std::vector<u64> prime_divisors(u64 n) {
  std::vector<u64> out;
  for (auto [p, e] : factorize(n)) out.push_back(p);
  return out;
}

u64 gcd(u64 a, u64 b) {
  while (b != 0) {
    u64 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

u64 lcm(u64 a, u64 b) { return a / gcd(a, b) * b; }

u64 totient(u64 n) {
  u64 r = n;
  for (u64 p : prime_divisors(n)) r = r / p * (p - 1);
  return r;
}

int mobius(u64 n) {
  int mu = 1;
  for (auto [p, e] : factorize(n)) {
    if (e > 1) return 0;
    mu = -mu;
  }
  return mu;
}

std::vector<u64> divisors(u64 n) {
  std::vector<u64> small, large;
  for (u64 d = 1; d * d <= n; ++d) {
    if (n % d != 0) continue;
    small.push_back(d);
    if (d != n / d) large.push_back(n / d);
  }
  small.insert(small.end(), large.rbegin(), large.rend());
  return small;
}

u64 mulmod(u64 a, u64 b, u64 m) {
  return static_cast<u64>(static_cast<unsigned __int128>(a) * b % m);
}

u64 powmod(u64 base, u64 exp, u64 m) {
  if (m == 1) return 0;
  u64 result = 1;
  base %= m;
  while (exp > 0) {
    if (exp & 1) result = mulmod(result, base, m);
    base = mulmod(base, base, m);
    exp >>= 1;
  }
  return result;
}

u64 invmod(u64 a, u64 m) {
  i64 t = 0, new_t = 1;
  i64 r = static_cast<i64>(m), new_r = static_cast<i64>(a % m);
  while (new_r != 0) {
    i64 quot = r / new_r;
    i64 tmp = t - quot * new_t;
    t = new_t;
    new_t = tmp;
    tmp = r - quot * new_r;
    r = new_r;
    new_r = tmp;
  }
  if (r != 1) throw ArithmeticError("invmod: " + std::to_string(a) + " is not invertible mod " + std::to_string(m));
  return mod_floor(t, m);
}

u64 mod_floor(i64 a, u64 m) {
  i64 r = a % static_cast<i64>(m);
  return static_cast<u64>(r < 0 ? r + static_cast<i64>(m) : r);
}

u64 multiplicative_order(u64 a, u64 n) {
  if (n == 1) return 1;
  if (gcd(a % n, n) != 1) throw ArithmeticError("multiplicative_order: element not a unit");
  u64 ord = totient(n);
  for (u64 p : prime_divisors(ord)) {
    while (ord % p == 0 && powmod(a, ord / p, n) == 1) ord /= p;
  }
  return ord;
}

u64 least_primitive_root(u64 q) {
  if (!is_prime(q)) throw DomainError("least_primitive_root: " + std::to_string(q) + " is not prime");
  if (q == 2) return 1;
  auto ps = prime_divisors(q - 1);
  for (u64 g = 2; g < q; ++g) {
    bool ok = true;
    for (u64 p : ps) {
      if (powmod(g, (q - 1) / p, q) == 1) {
        ok = false;
        break;
      }
    }
    if (ok) return g;
  }
  throw InternalInconsistency("no primitive root found");
}

u64 crt_pair(u64 r1, u64 m1, u64 r2, u64 m2) {
  // x = r1 + m1 * k with m1 * k = r2 - r1 (mod m2)
  u64 M = m1 * m2;
  if (m2 == 1) return r1 % M;
  u64 diff = mod_floor(static_cast<i64>(r2 % m2) - static_cast<i64>(r1 % m2), m2);
  u64 k = mulmod(diff, invmod(m1 % m2, m2), m2);
  return (r1 % m1 + mulmod(m1, k, M)) % M;
}

unsigned valuation(const Integer& x, u64 q) {
  if (x == 0) throw ArithmeticError("valuation of zero");
  Integer y = abs(x);
  unsigned v = 0;
  while (mpz_divisible_ui_p(y.get_mpz_t(), q)) {
    mpz_divexact_ui(y.get_mpz_t(), y.get_mpz_t(), q);
    ++v;
  }
  return v;
}

std::vector<u64> unit_residues(u64 m) {
  std::vector<u64> out;
  if (m == 1) return {0};
  for (u64 a = 1; a < m; ++a) {
    if (gcd(a, m) == 1) out.push_back(a);
  }
  return out;
}

}  // namespace kforge

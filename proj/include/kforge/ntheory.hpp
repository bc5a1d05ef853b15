#pragma once

// Small-integer number theory used throughout: primality, factoring of
// machine-size integers, modular powers, orders and primitive roots.

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace kforge {

using Integer = mpz_class;
using Rational = mpq_class;

using u64 = std::uint64_t;
using i64 = std::int64_t;

std::string to_string(const Integer& x);
std::string to_string(const Rational& x);

bool is_prime(u64 n);
/// Distinct prime divisors in increasing order. factor(0) and factor(1) are empty.
std::vector<u64> prime_divisors(u64 n);
/// Prime factorization as (prime, exponent) pairs in increasing order.
std::vector<std::pair<u64, unsigned>> factorize(u64 n);

u64 gcd(u64 a, u64 b);
u64 lcm(u64 a, u64 b);
u64 totient(u64 n);
int mobius(u64 n);
std::vector<u64> divisors(u64 n);

u64 mulmod(u64 a, u64 b, u64 m);
u64 powmod(u64 base, u64 exp, u64 m);
/// Inverse of a modulo m; throws ArithmeticError when gcd(a, m) != 1.
u64 invmod(u64 a, u64 m);
/// Least nonnegative residue of a modulo m for signed a.
u64 mod_floor(i64 a, u64 m);

/// Multiplicative order of a modulo n (gcd(a, n) = 1 required).
u64 multiplicative_order(u64 a, u64 n);
/// Least primitive root modulo the prime q.
u64 least_primitive_root(u64 q);

/// Chinese remainder for coprime moduli: the x mod m1*m2 with x = r1 (m1), x = r2 (m2).
u64 crt_pair(u64 r1, u64 m1, u64 r2, u64 m2);

/// q-adic valuation of a nonzero integer.
unsigned valuation(const Integer& x, u64 q);

/// Multiplicative group (Z/m)^x enumerated in increasing order.
std::vector<u64> unit_residues(u64 m);

}  // namespace kforge

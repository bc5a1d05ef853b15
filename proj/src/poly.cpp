#include "kforge/poly.hpp"

namespace kforge {

PolyGcd poly_extended_gcd(const QPoly& a, const QPoly& b) {
  if (a.is_zero() && b.is_zero()) throw ArithmeticError("gcd of zero pair");
  QPoly r0 = a, r1 = b;
  QPoly s0 = QPoly::constant(1), s1;
  QPoly t0, t1 = QPoly::constant(1);
  while (!r1.is_zero()) {
    auto [quot, rem] = r0.divmod(r1);
    r0 = std::move(r1);
    r1 = std::move(rem);
    QPoly s2 = s0 - quot * s1;
    s0 = std::move(s1);
    s1 = std::move(s2);
    QPoly t2 = t0 - quot * t1;
    t0 = std::move(t1);
    t1 = std::move(t2);
  }
  Rational inv = Rational(1) / r0.leading();
  return {r0 * inv, s0 * inv, t0 * inv};
}

}  // namespace kforge

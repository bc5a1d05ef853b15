#include "kforge/residue.hpp"

namespace kforge {

namespace {

Integer pow_ui(u64 base, unsigned k) {
  Integer r;
  mpz_ui_pow_ui(r.get_mpz_t(), base, k);
  return r;
}

Integer mod_pos(const Integer& a, const Integer& m) {
  Integer r;
  mpz_mod(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t());
  return r;
}

}  // namespace

ResidueInt::ResidueInt(Integer value, u64 ell, unsigned k)
    : modulus_(pow_ui(ell, k)), ell_(ell), k_(k) {
  value_ = mod_pos(value, modulus_);
}

ResidueInt ResidueInt::reduce(unsigned j) const {
  if (j > k_) throw DomainError("ResidueInt::reduce: cannot raise precision");
  return ResidueInt(value_, ell_, j);
}

Integer eval_mod(const ZPoly& f, const Integer& x, const Integer& mod) {
  Integer acc = 0;
  const auto& c = f.coeffs();
  for (auto it = c.rbegin(); it != c.rend(); ++it) {
    acc = acc * x + *it;
    acc = mod_pos(acc, mod);
  }
  return acc;
}

ResidueInt hensel_lift_root(const ZPoly& f, u64 ell, u64 c, unsigned k) {
  if (k == 0) throw DomainError("hensel_lift_root: precision must be positive");
  const Integer ell_z(static_cast<unsigned long>(ell));
  if (eval_mod(f, Integer(static_cast<unsigned long>(c)), ell_z) != 0) {
    throw DomainError("hensel_lift_root: " + std::to_string(c) + " is not a root mod " + std::to_string(ell));
  }
  const ZPoly df = f.derivative();
  Integer r = static_cast<unsigned long>(c % ell);
  if (eval_mod(df, r, ell_z) == 0) throw ArithmeticError("Hensel obstruction");

  // Quadratic Newton steps: precision doubles each round.
  unsigned prec = 1;
  while (prec < k) {
    prec = std::min(2 * prec, k);
    Integer mod = pow_ui(ell, prec);
    Integer fr = eval_mod(f, r, mod);
    Integer dfr = eval_mod(df, r, mod);
    Integer inv;
    if (mpz_invert(inv.get_mpz_t(), dfr.get_mpz_t(), mod.get_mpz_t()) == 0) {
      throw ArithmeticError("Hensel obstruction");
    }
    r = mod_pos(r - fr * inv, mod);
  }
  return ResidueInt(r, ell, k);
}

}  // namespace kforge

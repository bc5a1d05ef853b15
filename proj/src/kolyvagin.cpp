#include "kforge/kolyvagin.hpp"

#include <algorithm>
#include <random>
#include <sstream>

#include "kforge/error.hpp"
#include "kforge/finite_field.hpp"

namespace kforge {

// ---------------------------------------------------------------------------
// Parameters and prime search

void KolyParams::validate() const {
  if (p < 3 || !is_prime(p)) throw DomainError("p must be an odd prime (got " + std::to_string(p) + ")");
  if (n > 8) throw DomainError("level n too large");
  u64 x = M;
  while (x > 1 && x % p == 0) x /= p;
  if (M == 0 || x != 1) throw DomainError("M must be a power of p (got " + std::to_string(M) + ")");
}

u64 KolyParams::conductor() const {
  u64 m = p;
  for (unsigned i = 0; i < n; ++i) m *= p;
  return m;
}

void validate_for(const KolyParams& params, const EulerSystem& E) {
  params.validate();
  if (!E.admits_order(params.p)) {
    throw DomainError("p = " + std::to_string(params.p) + " lies in S for " + E.to_string());
  }
}

std::vector<u64> find_kolyvagin_primes(const KolyParams& params, u64 limit) {
  params.validate();
  const u64 m = params.conductor();
  std::vector<u64> out;
  for (u64 q = 3; q <= limit; q += 2) {
    if (q % params.M != 1 % params.M) continue;
    const u64 r = q % m;
    if (r != 1 && r != m - 1) continue;
    if (is_prime(q)) out.push_back(q);
  }
  return out;
}

void require_kolyvagin_prime(const KolyParams& params, u64 q) {
  params.validate();
  const u64 m = params.conductor();
  if (!is_prime(q) || q == 2 || q % params.M != 1 % params.M || (q % m != 1 && q % m != m - 1)) {
    throw DomainError("not a Kolyvagin prime: " + std::to_string(q));
  }
  if (q % m != 1) {
    throw DomainError("closed-form cocycles need q = 1 mod " + std::to_string(m) + " (got " + std::to_string(q) + ")");
  }
}

// ---------------------------------------------------------------------------
// Group ring

GroupRingOp::GroupRingOp(std::vector<u64> orders) : orders_(std::move(orders)) {
  for (u64 o : orders_) {
    if (o == 0) throw DomainError("GroupRingOp: generator order must be positive");
  }
}

GroupRingOp GroupRingOp::constant(std::vector<u64> orders, const Integer& c) {
  GroupRingOp op(std::move(orders));
  op.add_term(Key(op.orders_.size(), 0), c);
  return op;
}

GroupRingOp GroupRingOp::element(std::vector<u64> orders, Key exponents, const Integer& c) {
  GroupRingOp op(std::move(orders));
  op.add_term(std::move(exponents), c);
  return op;
}

void GroupRingOp::add_term(Key exponents, const Integer& c) {
  if (exponents.size() != orders_.size()) throw DomainError("GroupRingOp: exponent tuple has the wrong length");
  for (std::size_t i = 0; i < exponents.size(); ++i) exponents[i] %= orders_[i];
  if (c == 0) return;
  auto [it, inserted] = terms_.emplace(std::move(exponents), c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }
}

void GroupRingOp::require_same_group(const GroupRingOp& o) const {
  if (orders_ != o.orders_) throw DomainError("GroupRingOp: operands live in different groups");
}

GroupRingOp& GroupRingOp::operator+=(const GroupRingOp& o) {
  require_same_group(o);
  for (const auto& [k, c] : o.terms_) add_term(k, c);
  return *this;
}

GroupRingOp& GroupRingOp::operator-=(const GroupRingOp& o) {
  require_same_group(o);
  for (const auto& [k, c] : o.terms_) add_term(k, -c);
  return *this;
}

GroupRingOp operator*(const GroupRingOp& a, const GroupRingOp& b) {
  a.require_same_group(b);
  GroupRingOp out(a.orders_);
  for (const auto& [ka, ca] : a.terms_) {
    for (const auto& [kb, cb] : b.terms_) {
      GroupRingOp::Key k(ka.size());
      for (std::size_t i = 0; i < k.size(); ++i) k[i] = ka[i] + kb[i];
      out.add_term(std::move(k), ca * cb);
    }
  }
  return out;
}

GroupRingOp GroupRingOp::lift(const std::vector<u64>& new_orders, std::size_t slot) const {
  if (orders_.size() != 1 || slot >= new_orders.size() || new_orders[slot] != orders_[0]) {
    throw DomainError("GroupRingOp::lift: incompatible groups");
  }
  GroupRingOp out(new_orders);
  for (const auto& [k, c] : terms_) {
    Key nk(new_orders.size(), 0);
    nk[slot] = k[0];
    out.add_term(std::move(nk), c);
  }
  return out;
}

std::string GroupRingOp::to_string(const std::vector<std::string>& names) const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [k, c] : terms_) {
    os << (first ? "" : (c < 0 ? " - " : " + ")) << (first && c < 0 ? "-" : "");
    first = false;
    const Integer a = abs(c);
    bool any = false;
    std::ostringstream mono;
    for (std::size_t i = 0; i < k.size(); ++i) {
      if (k[i] == 0) continue;
      mono << (any ? "*" : "") << (i < names.size() ? names[i] : "g" + std::to_string(i));
      if (k[i] > 1) mono << "^" << k[i];
      any = true;
    }
    if (!any) {
      os << a.get_str();
    } else {
      if (a != 1) os << a.get_str() << "*";
      os << mono.str();
    }
  }
  return os.str();
}

Operators build_operators(u64 q) {
  if (q < 3 || !is_prime(q)) throw DomainError("build_operators: q must be an odd prime");
  const std::vector<u64> orders{q - 1};
  Operators ops{GroupRingOp(orders), GroupRingOp(orders)};
  for (u64 i = 0; i <= q - 2; ++i) {
    ops.norm.add_term({i}, 1);
    if (i >= 1) ops.derivative.add_term({i}, Integer(static_cast<unsigned long>(i)));
  }
  return ops;
}

bool derivative_identity_holds(u64 q) {
  const Operators ops = build_operators(q);
  const std::vector<u64> orders{q - 1};
  const GroupRingOp sigma_minus_one = GroupRingOp::element(orders, {1}) - GroupRingOp::constant(orders, 1);
  const GroupRingOp lhs = sigma_minus_one * ops.derivative;
  const GroupRingOp rhs = GroupRingOp::constant(orders, Integer(static_cast<unsigned long>(q - 1))) - ops.norm;
  return lhs == rhs;
}

CycloElt apply_group_ring(const GroupRingOp& op, const CycloElt& x, const std::vector<u64>& generators) {
  if (generators.size() != op.orders().size()) throw DomainError("apply_group_ring: generator count mismatch");
  const u64 L = x.conductor();
  const FieldPtr& f = x.field();
  CycloElt pos = CycloElt::from_rational(f, 1);
  CycloElt neg = CycloElt::from_rational(f, 1);
  bool has_neg = false;
  for (const auto& [k, c] : op.terms()) {
    u64 a = 1 % L;
    for (std::size_t i = 0; i < k.size(); ++i) a = mulmod(a, powmod(generators[i] % L, k[i], L), L);
    if (!c.fits_slong_p()) throw BudgetError("apply_group_ring: coefficient too large");
    const long e = c.get_si();
    const CycloElt conj = galois_apply(a, x);
    if (e > 0) {
      pos *= pow(conj, e);
    } else {
      neg *= pow(conj, -e);
      has_neg = true;
    }
  }
  if (!has_neg) return pos;
  if (x.is_zero()) throw ArithmeticError("apply_group_ring: zero base with a negative coefficient");
  return pos * elt_inverse(neg);
}

// ---------------------------------------------------------------------------
// Levels and cocycles

std::vector<u64> Level::orders() const {
  std::vector<u64> o;
  for (u64 q : primes) o.push_back(q - 1);
  return o;
}

Level make_level(const KolyParams& params, std::vector<u64> s) {
  params.validate();
  std::sort(s.begin(), s.end());
  if (std::adjacent_find(s.begin(), s.end()) != s.end()) throw DomainError("s must be squarefree");
  for (u64 q : s) require_kolyvagin_prime(params, q);
  Level lv;
  lv.params = params;
  lv.primes = s;
  const u64 m = params.conductor();
  u64 sp = 1;
  for (u64 q : s) sp *= q;
  lv.conductor = m * sp;
  const u64 ms = lv.conductor;
  u64 point = sp % ms;
  for (u64 q : s) {
    const u64 t = least_primitive_root(q);
    lv.primitive_roots.push_back(t);
    lv.generators.push_back(crt_pair(t, q, 1 % (ms / q), ms / q));
    point = (point + ms / q) % ms;
  }
  lv.point_exponent = static_cast<i64>(point);
  return lv;
}

namespace {

// D_q x = prod_{i=1}^{q-2} sigma^i(x)^i via the running suffix products
// P_k = prod_{i >= k} sigma^i(x), so D_q x = prod_k P_k.
CycloElt apply_derivative(const CycloElt& x, u64 generator, u64 q) {
  const u64 L = x.conductor();
  std::vector<CycloElt> conj(q - 1);
  u64 a = 1 % L;
  for (u64 i = 0; i + 1 < q; ++i) {
    if (i >= 1) conj[i] = galois_apply(a, x);
    a = mulmod(a, generator, L);
  }
  CycloElt suffix = CycloElt::from_rational(x.field(), 1);
  CycloElt result = CycloElt::from_rational(x.field(), 1);
  for (u64 k = q - 2; k >= 1; --k) {
    suffix *= conj[k];
    result *= suffix;
  }
  return result;
}

std::vector<GaloisElt> cyclic_subgroup(const FieldPtr& f, u64 generator, u64 order) {
  std::vector<GaloisElt> H;
  u64 a = 1 % f->conductor();
  for (u64 i = 0; i < order; ++i) {
    H.emplace_back(f, static_cast<i64>(a));
    a = mulmod(a, generator, f->conductor());
  }
  return H;
}

}  // namespace

bool Cocycle::certified() const {
  return std::all_of(values.begin(), values.end(),
                     [](const CocycleValue& v) { return v.certified && v.norm_trivial; });
}

Cocycle cocycle_closed_form(const EulerSystem& E, const KolyParams& params, const std::vector<u64>& s) {
  validate_for(params, E);
  if (s.size() > 2) throw BudgetError("instance too large: at most two primes in s");
  Cocycle out;
  out.level = make_level(params, s);
  const Level& lv = out.level;
  if (!E.admits_order(lv.conductor)) throw DomainError("zeta_n eta_s lies outside W_S");
  const FieldPtr K = cyclotomic_field(lv.conductor);
  const CycloElt phi_s = phi_eval(E, RootOfUnity(lv.conductor, lv.point_exponent));

  CycloElt D = phi_s;
  for (std::size_t i = 0; i < lv.primes.size(); ++i) D = apply_derivative(D, lv.generators[i], lv.primes[i]);
  out.derivative = D;

  for (std::size_t i = 0; i < lv.primes.size(); ++i) {
    const u64 q = lv.primes[i];
    CocycleValue v;
    v.q = q;
    v.generator = lv.generators[i];
    const i64 expo = static_cast<i64>((q - 1) / params.M);
    if (lv.primes.size() == 1) {
      v.c = pow(phi_s, expo);
    } else {
      const std::size_t j = 1 - i;
      const u64 r = lv.primes[j];
      const CycloElt Dr = apply_derivative(phi_s, lv.generators[j], r);
      // Level-r closed form phi(zeta_n eta_r)^((r-1)/M), seen in Q(zeta_ms).
      const Level lr = make_level(params, {r});
      const CycloElt cr = embed_up(pow(phi_eval(E, RootOfUnity(lr.conductor, lr.point_exponent)),
                                       static_cast<i64>((r - 1) / params.M)),
                                   lv.conductor);
      // Frob_q restricted to Q(zeta_mr) is sigma_r^e with t_r^e = q mod r.
      const FiniteField Fr = FiniteField::prime_field(r);
      const u64 e = ff_discrete_log(Fr, Fr.from_int(static_cast<i64>(lv.primitive_roots[j])),
                                    Fr.from_int(static_cast<i64>(q % r)))
                        .get_ui();
      CycloElt frob_part = CycloElt::from_rational(K, 1);
      u64 a = 1;
      for (u64 k = 0; k < e; ++k) {
        frob_part *= galois_apply(a, cr);
        a = mulmod(a, lv.generators[j], lv.conductor);
      }
      v.c = pow(Dr, expo) * elt_inverse(frob_part);
    }
    // c^M = (sigma - 1) D, checked as sigma(D) = c^M D.
    v.certified = galois_apply(v.generator, D) == pow(v.c, static_cast<i64>(params.M)) * D;
    v.norm_trivial = relative_norm(v.c, cyclic_subgroup(K, v.generator, q - 1)).is_one();
    out.values.push_back(std::move(v));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Hilbert 90 and kappa

Hilbert90 hilbert90_beta(const Cocycle& cocycle, u64 seed) {
  const Level& lv = cocycle.level;
  const FieldPtr K = cyclotomic_field(lv.conductor);
  Hilbert90 out;
  if (cocycle.values.empty()) {
    out.beta = CycloElt::from_rational(K, 1);
    out.verified = true;
    return out;
  }
  if (!cocycle.certified()) throw DomainError("hilbert90: cocycle certificate is not valid");
  const u64 L = lv.conductor;

  // a_{sigma^k} along each generator: a_{sigma^(k+1)} = a_sigma sigma(a_{sigma^k}).
  std::vector<std::vector<CycloElt>> cyc;
  for (const auto& v : cocycle.values) {
    const CycloElt a = elt_inverse(v.c);
    std::vector<CycloElt> chain{CycloElt::from_rational(K, 1)};
    for (u64 k = 1; k < v.q - 1; ++k) chain.push_back(a * galois_apply(v.generator, chain.back()));
    if (!(a * galois_apply(v.generator, chain.back())).is_one()) {
      throw InternalInconsistency("cocycle does not close up along sigma_" + std::to_string(v.q));
    }
    cyc.push_back(std::move(chain));
  }
  if (cyc.size() == 2) {
    const u64 g1 = cocycle.values[0].generator, g2 = cocycle.values[1].generator;
    const CycloElt& a1 = cyc[0][1];
    const CycloElt& a2 = cyc[1][1];
    if (!(a1 * galois_apply(g1, a2) == a2 * galois_apply(g2, a1))) {
      throw InternalInconsistency("cocycle extension is not well defined on commuting generators");
    }
  }

  // All group elements g with their a_g.
  std::vector<std::pair<u64, CycloElt>> table;
  const u64 g1 = cocycle.values[0].generator;
  u64 r1 = 1 % L;
  for (std::size_t i = 0; i < cyc[0].size(); ++i) {
    if (cyc.size() == 1) {
      table.emplace_back(r1, cyc[0][i]);
    } else {
      const u64 g2 = cocycle.values[1].generator;
      u64 r2 = 1 % L;
      for (std::size_t j = 0; j < cyc[1].size(); ++j) {
        table.emplace_back(mulmod(r1, r2, L), cyc[0][i] * galois_apply(r1, cyc[1][j]));
        r2 = mulmod(r2, g2, L);
      }
    }
    r1 = mulmod(r1, g1, L);
  }

  std::mt19937_64 rng(seed);
  const std::size_t phi = K->degree();
  for (unsigned attempt = 1; attempt <= 32; ++attempt) {
    std::vector<Integer> t0(phi);
    for (auto& c : t0) c = static_cast<long>(rng() % 7) - 3;
    const CycloElt theta0(K, std::move(t0));
    const CycloElt theta = theta0 + galois_apply(L - 1, theta0);
    CycloElt beta(K);
    for (const auto& [g, a] : table) beta += a * galois_apply(g, theta);
    if (beta.is_zero()) continue;
    out.beta = std::move(beta);
    out.attempts = attempt;
    out.verified = std::all_of(cocycle.values.begin(), cocycle.values.end(), [&](const CocycleValue& v) {
      return galois_apply(v.generator, out.beta) == v.c * out.beta;
    });
    return out;
  }
  throw BudgetError("resolvent exhausted");
}

KappaClass kappa(const EulerSystem& E, const KolyParams& params, const std::vector<u64>& s_in, u64 seed) {
  validate_for(params, E);
  const u64 m = params.conductor();
  KappaClass out;
  out.params = params;
  out.seed = seed;
  if (s_in.empty()) {
    out.kappa = phi_eval(E, RootOfUnity(m, 1));
    out.beta = CycloElt::from_rational(cyclotomic_field(m), 1);
    out.cocycle.level = make_level(params, {});
    out.cocycle.derivative = out.kappa;
    out.invariant = is_in_real_subfield(out.kappa);
    return out;
  }
  out.cocycle = cocycle_closed_form(E, params, s_in);
  out.s = out.cocycle.level.primes;
  if (!out.cocycle.certified()) throw InternalInconsistency("cocycle certificate failed");
  Hilbert90 h = hilbert90_beta(out.cocycle, seed);
  if (!h.verified) throw InternalInconsistency("beta does not satisfy (sigma - 1) beta = c");
  out.beta = h.beta;
  out.attempts = h.attempts;
  const CycloElt big = out.cocycle.derivative * pow(elt_inverse(out.beta), static_cast<i64>(params.M));
  for (u64 g : out.cocycle.level.generators) {
    if (!(galois_apply(g, big) == big)) throw InternalInconsistency("kappa is not fixed by G(s)");
  }
  try {
    out.kappa = descend(big, m);
  } catch (const DomainError&) {
    throw InternalInconsistency("kappa does not descend to Q(zeta_m)");
  }
  out.invariant = is_in_real_subfield(out.kappa);
  if (!out.invariant) throw InternalInconsistency("kappa is not real");
  return out;
}

}  // namespace kforge

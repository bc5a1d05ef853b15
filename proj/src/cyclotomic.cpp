#include "kforge/cyclotomic.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <sstream>

#include "kforge/error.hpp"

namespace kforge {

namespace {

// Exact quotient a / b of integer polynomials with b monic.
ZPoly exact_div_monic(const ZPoly& a, const ZPoly& b) {
  std::vector<Integer> r = a.coeffs();
  const auto& d = b.coeffs();
  if (r.size() < d.size()) throw InternalInconsistency("exact_div_monic: degree too small");
  std::vector<Integer> q(r.size() - d.size() + 1);
  for (std::size_t k = q.size(); k-- > 0;) {
    q[k] = r[k + d.size() - 1];
    if (q[k] == 0) continue;
    for (std::size_t j = 0; j < d.size(); ++j) r[k + j] -= q[k] * d[j];
  }
  for (std::size_t i = 0; i + 1 < d.size(); ++i) {
    if (r[i] != 0) throw InternalInconsistency("exact_div_monic: nonzero remainder");
  }
  return ZPoly(std::move(q));
}

std::mutex& poly_mutex() {
  static std::mutex mu;
  return mu;
}

std::map<u64, ZPoly>& poly_cache() {
  static std::map<u64, ZPoly> cache;
  return cache;
}

ZPoly x_pow_minus_one(u64 m) {
  std::vector<Integer> c(m + 1, 0);
  c[0] = -1;
  c[m] = 1;
  return ZPoly(std::move(c));
}

ZPoly compute_cyclotomic(u64 m) {
  {
    std::lock_guard<std::mutex> lock(poly_mutex());
    auto it = poly_cache().find(m);
    if (it != poly_cache().end()) return it->second;
  }
  ZPoly acc = x_pow_minus_one(m);
  for (u64 d : divisors(m)) {
    if (d == m) continue;
    acc = exact_div_monic(acc, compute_cyclotomic(d));
  }
  std::lock_guard<std::mutex> lock(poly_mutex());
  poly_cache().emplace(m, acc);
  return acc;
}

}  // namespace

ZPoly cyclotomic_polynomial(u64 m) {
  if (m == 0) throw DomainError("cyclotomic_polynomial: m must be positive");
  return compute_cyclotomic(m);
}

// ---------------------------------------------------------------------------
// CycloField

CycloField::CycloField(u64 m, ZPoly cyclo_poly, std::vector<u64> unit_group)
    : m_(m), phi_(static_cast<u64>(cyclo_poly.degree())), cyclo_poly_(std::move(cyclo_poly)),
      unit_group_(std::move(unit_group)) {
  if (!cyclo_poly_.is_monic()) throw DomainError("CycloField: Phi_m must be monic");
  if (unit_group_.size() != phi_) throw DomainError("CycloField: unit group size differs from degree");
  const auto& c = cyclo_poly_.coeffs();
  for (std::size_t j = 0; j < phi_; ++j) {
    if (c[j] != 0) {
      if (!c[j].fits_slong_p()) throw DomainError("CycloField: Phi_m coefficient out of range");
      tail_.emplace_back(j, c[j].get_si());
    }
  }
}

void CycloField::reduce(std::vector<Integer>& v) const {
  if (v.size() > m_) {
    // x^m = 1 modulo Phi_m
    for (std::size_t i = m_; i < v.size(); ++i) {
      if (v[i] != 0) v[i % m_] += v[i];
    }
    v.resize(m_);
  }
  for (std::size_t i = v.size(); i-- > phi_;) {
    mpz_srcptr t = v[i].get_mpz_t();
    if (mpz_sgn(t) == 0) continue;
    const std::size_t base = i - phi_;
    for (auto [j, cj] : tail_) {
      mpz_ptr dst = v[base + j].get_mpz_t();
      if (cj > 0) {
        mpz_submul_ui(dst, t, static_cast<unsigned long>(cj));
      } else {
        mpz_addmul_ui(dst, t, static_cast<unsigned long>(-cj));
      }
    }
  }
  v.resize(phi_, Integer(0));
}

// ---------------------------------------------------------------------------
// Field cache

namespace {

struct FieldCache {
  std::mutex mu;
  std::map<u64, FieldPtr> fields;
  std::shared_ptr<FieldTableStore> store;
};

FieldCache& field_cache() {
  static FieldCache cache;
  return cache;
}

FieldPtr build_field(u64 m) {
  return std::make_shared<const CycloField>(m, cyclotomic_polynomial(m), unit_residues(m));
}

}  // namespace

void set_field_table_store(std::shared_ptr<FieldTableStore> store) {
  auto& cache = field_cache();
  std::lock_guard<std::mutex> lock(cache.mu);
  cache.store = std::move(store);
}

FieldTables tables_of(const CycloField& field) {
  FieldTables t;
  t.m = field.conductor();
  for (const auto& c : field.cyclo_poly().coeffs()) t.cyclo_coeffs.push_back(c.get_si());
  t.unit_group = field.unit_group();
  return t;
}

std::optional<FieldPtr> field_from_tables(const FieldTables& t) {
  if (t.m == 0) return std::nullopt;
  const u64 phi = totient(t.m);
  if (t.cyclo_coeffs.size() != phi + 1 || t.cyclo_coeffs.back() != 1) return std::nullopt;
  if (t.unit_group != unit_residues(t.m)) return std::nullopt;
  std::vector<Integer> c;
  for (long x : t.cyclo_coeffs) c.emplace_back(x);
  ZPoly p(std::move(c));
  // Phi_m must divide x^m - 1 exactly and agree with the recomputed polynomial.
  try {
    (void)exact_div_monic(x_pow_minus_one(t.m), p);
  } catch (const InternalInconsistency&) {
    return std::nullopt;
  }
  if (!(p == cyclotomic_polynomial(t.m))) return std::nullopt;
  return std::make_shared<const CycloField>(t.m, std::move(p), t.unit_group);
}

FieldPtr cyclotomic_field(u64 m) {
  if (m == 0) throw DomainError("cyclotomic_field: conductor must be positive");
  auto& cache = field_cache();
  std::shared_ptr<FieldTableStore> store;
  {
    std::lock_guard<std::mutex> lock(cache.mu);
    auto it = cache.fields.find(m);
    if (it != cache.fields.end()) return it->second;
    store = cache.store;
  }
  FieldPtr field;
  if (store) {
    if (auto tables = store->load(m)) {
      if (auto f = field_from_tables(*tables)) field = *f;
    }
  }
  if (!field) {
    field = build_field(m);
    if (store) store->save(tables_of(*field));
  }
  std::lock_guard<std::mutex> lock(cache.mu);
  // First writer wins so every caller shares one object per conductor.
  auto [it, inserted] = cache.fields.emplace(m, field);
  return it->second;
}

// ---------------------------------------------------------------------------
// CycloElt

CycloElt::CycloElt() : CycloElt(cyclotomic_field(1)) {}

CycloElt::CycloElt(FieldPtr field) : field_(std::move(field)), num_(field_->degree()), den_(1) {}

CycloElt::CycloElt(FieldPtr field, std::vector<Integer> num, Integer den)
    : field_(std::move(field)), num_(std::move(num)), den_(std::move(den)) {
  if (den_ == 0) throw ArithmeticError("division by zero");
  field_->reduce(num_);
  normalize();
}

CycloElt CycloElt::from_rational(FieldPtr field, const Rational& r) {
  std::vector<Integer> num(field->degree());
  num[0] = r.get_num();
  return CycloElt(std::move(field), std::move(num), r.get_den());
}

CycloElt CycloElt::from_rationals(FieldPtr field, const std::vector<Rational>& coeffs) {
  Integer den = 1;
  for (const auto& c : coeffs) mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), c.get_den_mpz_t());
  std::vector<Integer> num;
  num.reserve(coeffs.size());
  for (const auto& c : coeffs) num.push_back(c.get_num() * (den / c.get_den()));
  return CycloElt(std::move(field), std::move(num), den);
}

CycloElt CycloElt::root_of_unity(FieldPtr field, i64 e) {
  const u64 m = field->conductor();
  std::vector<Integer> num(m);
  num[mod_floor(e, m)] = 1;
  return CycloElt(std::move(field), std::move(num), 1);
}

void CycloElt::normalize() {
  if (den_ < 0) {
    den_ = -den_;
    for (auto& c : num_) c = -c;
  }
  if (den_ == 1) return;
  Integer g = den_;
  for (const auto& c : num_) {
    if (c == 0) continue;
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_mpz_t());
    if (g == 1) return;
  }
  if (is_zero()) {
    den_ = 1;
    return;
  }
  for (auto& c : num_) mpz_divexact(c.get_mpz_t(), c.get_mpz_t(), g.get_mpz_t());
  mpz_divexact(den_.get_mpz_t(), den_.get_mpz_t(), g.get_mpz_t());
}

void CycloElt::require_same_field(const CycloElt& o) const {
  if (field_->conductor() != o.field_->conductor()) {
    throw DomainError("cyclotomic elements live in different fields (m = " + std::to_string(field_->conductor()) +
                      " vs " + std::to_string(o.field_->conductor()) + ")");
  }
}

Rational CycloElt::coeff(std::size_t i) const {
  Rational r(num_.at(i), den_);
  r.canonicalize();
  return r;
}

std::vector<Rational> CycloElt::coeffs() const {
  std::vector<Rational> out;
  out.reserve(num_.size());
  for (std::size_t i = 0; i < num_.size(); ++i) out.push_back(coeff(i));
  return out;
}

bool CycloElt::is_zero() const {
  return std::all_of(num_.begin(), num_.end(), [](const Integer& c) { return c == 0; });
}

bool CycloElt::is_rational() const {
  return std::all_of(num_.begin() + 1, num_.end(), [](const Integer& c) { return c == 0; });
}

bool CycloElt::is_one() const { return is_rational() && den_ == 1 && num_[0] == 1; }

Rational CycloElt::rational_value() const {
  if (!is_rational()) throw DomainError("element is not rational");
  return coeff(0);
}

CycloElt& CycloElt::operator+=(const CycloElt& o) {
  require_same_field(o);
  if (den_ == o.den_) {
    for (std::size_t i = 0; i < num_.size(); ++i) num_[i] += o.num_[i];
  } else {
    for (std::size_t i = 0; i < num_.size(); ++i) num_[i] = num_[i] * o.den_ + o.num_[i] * den_;
    den_ *= o.den_;
  }
  normalize();
  return *this;
}

CycloElt& CycloElt::operator-=(const CycloElt& o) { return *this += -o; }

CycloElt operator-(CycloElt a) {
  for (auto& c : a.num_) mpz_neg(c.get_mpz_t(), c.get_mpz_t());
  return a;
}

CycloElt operator*(const CycloElt& a, const CycloElt& b) {
  a.require_same_field(b);
  const std::size_t n = a.num_.size();
  std::vector<Integer> r(2 * n - 1);
  for (std::size_t i = 0; i < n; ++i) {
    mpz_srcptr ai = a.num_[i].get_mpz_t();
    if (mpz_sgn(ai) == 0) continue;
    for (std::size_t j = 0; j < n; ++j) {
      mpz_srcptr bj = b.num_[j].get_mpz_t();
      if (mpz_sgn(bj) == 0) continue;
      mpz_addmul(r[i + j].get_mpz_t(), ai, bj);
    }
  }
  return CycloElt(a.field_, std::move(r), a.den_ * b.den_);
}

CycloElt& CycloElt::operator*=(const CycloElt& o) { return *this = *this * o; }

CycloElt& CycloElt::operator*=(const Rational& r) {
  if (r == 0) {
    *this = CycloElt(field_);
    return *this;
  }
  for (auto& c : num_) c *= r.get_num();
  den_ *= r.get_den();
  normalize();
  return *this;
}

bool operator==(const CycloElt& a, const CycloElt& b) {
  return a.conductor() == b.conductor() && a.den_ == b.den_ && a.num_ == b.num_;
}

std::vector<std::string> CycloElt::to_strings() const {
  std::vector<std::string> out;
  out.reserve(num_.size());
  for (std::size_t i = 0; i < num_.size(); ++i) out.push_back(coeff(i).get_str());
  return out;
}

std::string CycloElt::to_string() const {
  std::ostringstream os;
  bool first = true;
  for (std::size_t i = 0; i < num_.size(); ++i) {
    Rational c = coeff(i);
    if (c == 0) continue;
    if (!first) os << (c < 0 ? " - " : " + ");
    else if (c < 0) os << "-";
    first = false;
    Rational a = abs(c);
    if (i == 0 || a != 1) os << a.get_str() << (i ? "*" : "");
    if (i > 0) os << "z" << (i > 1 ? "^" + std::to_string(i) : "");
  }
  return first ? "0" : os.str();
}

// ---------------------------------------------------------------------------
// Galois elements and roots of unity

GaloisElt::GaloisElt(FieldPtr field, i64 a) : field_(std::move(field)) {
  const u64 m = field_->conductor();
  a_ = mod_floor(a, m);
  if (m > 1 && gcd(a_, m) != 1) {
    throw DomainError("Galois residue " + std::to_string(a) + " is not coprime to " + std::to_string(m));
  }
}

GaloisElt GaloisElt::compose(const GaloisElt& o) const {
  const u64 m = field_->conductor();
  return GaloisElt(field_, static_cast<i64>(mulmod(a_, o.a_, m)));
}

GaloisElt GaloisElt::inverse() const {
  const u64 m = field_->conductor();
  return GaloisElt(field_, m == 1 ? 0 : static_cast<i64>(invmod(a_, m)));
}

RootOfUnity::RootOfUnity(u64 order_, i64 exponent_) : order(order_) {
  if (order == 0) throw DomainError("RootOfUnity: order must be positive");
  exponent = mod_floor(exponent_, order);
}

u64 RootOfUnity::exact_order() const { return order / gcd(order, exponent); }

u64 RootOfUnity::exponent_in(u64 ambient) const {
  if (ambient % order != 0) throw DomainError("RootOfUnity: order does not divide ambient conductor");
  return (exponent * (ambient / order)) % ambient;
}

// ---------------------------------------------------------------------------
// Galois action, embeddings

CycloElt galois_apply(u64 a, const CycloElt& x) {
  const FieldPtr& f = x.field();
  const u64 m = f->conductor();
  if (m > 1 && gcd(a % m, m) != 1) {
    throw DomainError("galois_apply: residue " + std::to_string(a) + " not coprime to " + std::to_string(m));
  }
  const auto& num = x.numerators();
  std::vector<Integer> w(m);
  for (std::size_t k = 0; k < num.size(); ++k) {
    if (num[k] != 0) w[mulmod(a % m, k, m)] += num[k];
  }
  return CycloElt(f, std::move(w), x.denominator());
}

CycloElt galois_apply(const GaloisElt& s, const CycloElt& x) {
  if (s.field()->conductor() != x.conductor()) throw DomainError("galois_apply: field mismatch");
  return galois_apply(s.residue(), x);
}

CycloElt embed_up(const CycloElt& x, u64 target) {
  const u64 m = x.conductor();
  if (target == 0 || target % m != 0) {
    throw DomainError("embed_up: " + std::to_string(m) + " does not divide " + std::to_string(target));
  }
  if (target == m) return x;
  const u64 step = target / m;
  const auto& num = x.numerators();
  std::vector<Integer> w(target);
  for (std::size_t k = 0; k < num.size(); ++k) w[k * step] = num[k];
  return CycloElt(cyclotomic_field(target), std::move(w), x.denominator());
}

namespace {

// Left inverse of the embedding Q(zeta_sub) -> Q(zeta_m) restricted to a set
// of pivot rows of the power-basis matrix.
struct DescendMap {
  std::vector<std::size_t> rows;
  std::vector<std::vector<Rational>> inv;  // sub_phi x sub_phi
};

DescendMap build_descend_map(u64 m, u64 sub) {
  const FieldPtr big = cyclotomic_field(m);
  const FieldPtr small = cyclotomic_field(sub);
  const std::size_t n = big->degree(), k = small->degree();
  // Column j: image of zeta_sub^j.
  std::vector<std::vector<Integer>> cols(k);
  for (std::size_t j = 0; j < k; ++j) {
    cols[j] = embed_up(CycloElt::root_of_unity(small, static_cast<i64>(j)), m).numerators();
  }
  // Greedily pick k independent rows, keeping a reduced echelon basis.
  DescendMap map;
  std::vector<std::vector<Rational>> basis;
  std::vector<std::size_t> pivots;
  for (std::size_t i = 0; i < n && map.rows.size() < k; ++i) {
    std::vector<Rational> row(k);
    for (std::size_t j = 0; j < k; ++j) row[j] = cols[j][i];
    for (std::size_t b = 0; b < basis.size(); ++b) {
      const Rational f = row[pivots[b]];
      if (f == 0) continue;
      for (std::size_t j = 0; j < k; ++j) row[j] -= f * basis[b][j];
    }
    auto it = std::find_if(row.begin(), row.end(), [](const Rational& r) { return r != 0; });
    if (it == row.end()) continue;
    const std::size_t piv = static_cast<std::size_t>(it - row.begin());
    const Rational inv = 1 / row[piv];
    for (auto& r : row) r *= inv;
    basis.push_back(std::move(row));
    pivots.push_back(piv);
    map.rows.push_back(i);
  }
  if (map.rows.size() != k) throw InternalInconsistency("descend: embedding matrix is rank deficient");
  // Gauss-Jordan inverse of the selected square block.
  std::vector<std::vector<Rational>> a(k, std::vector<Rational>(2 * k));
  for (std::size_t r = 0; r < k; ++r) {
    for (std::size_t j = 0; j < k; ++j) a[r][j] = cols[j][map.rows[r]];
    a[r][k + r] = 1;
  }
  for (std::size_t c = 0; c < k; ++c) {
    std::size_t p = c;
    while (p < k && a[p][c] == 0) ++p;
    if (p == k) throw InternalInconsistency("descend: singular block");
    std::swap(a[p], a[c]);
    const Rational inv = 1 / a[c][c];
    for (auto& x : a[c]) x *= inv;
    for (std::size_t r = 0; r < k; ++r) {
      if (r == c || a[r][c] == 0) continue;
      const Rational f = a[r][c];
      for (std::size_t j = 0; j < 2 * k; ++j) a[r][j] -= f * a[c][j];
    }
  }
  map.inv.assign(k, std::vector<Rational>(k));
  for (std::size_t r = 0; r < k; ++r) {
    for (std::size_t j = 0; j < k; ++j) map.inv[r][j] = a[r][k + j];
  }
  return map;
}

const DescendMap& descend_map(u64 m, u64 sub) {
  static std::mutex mu;
  static std::map<std::pair<u64, u64>, std::shared_ptr<const DescendMap>> cache;
  {
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find({m, sub});
    if (it != cache.end()) return *it->second;
  }
  auto built = std::make_shared<const DescendMap>(build_descend_map(m, sub));
  std::lock_guard<std::mutex> lock(mu);
  auto [it, inserted] = cache.emplace(std::make_pair(m, sub), built);
  return *it->second;
}

// Subconductor m / ell minimizing the relative degree, for tower recursion.
u64 tower_step(u64 m) {
  u64 best = 0, best_index = 0;
  const u64 phi = totient(m);
  for (u64 ell : prime_divisors(m)) {
    u64 index = phi / totient(m / ell);
    if (best == 0 || index < best_index) {
      best = m / ell;
      best_index = index;
    }
  }
  return best;
}

// N_H(x) with H = Gal(Q(zeta_m)/Q(zeta_sub)); also returns the product of the
// nontrivial conjugates (the "cofactor" y with x * y = N_H(x)).
std::pair<CycloElt, CycloElt> norm_to_subfield(const CycloElt& x, u64 sub) {
  CycloElt y = CycloElt::from_rational(x.field(), 1);
  for (const auto& s : subfield_fixer(x.field(), sub)) {
    if (s.residue() == 1 % x.conductor()) continue;
    y *= galois_apply(s, x);
  }
  CycloElt z = descend(x * y, sub);
  return {std::move(z), std::move(y)};
}

constexpr u64 kEuclidInverseMaxDegree = 16;

}  // namespace

CycloElt descend(const CycloElt& x, u64 target) {
  const u64 m = x.conductor();
  if (target == 0 || m % target != 0) {
    throw DomainError("descend: " + std::to_string(target) + " does not divide " + std::to_string(m));
  }
  if (target == m) return x;
  const DescendMap& map = descend_map(m, target);
  const std::size_t k = map.rows.size();
  std::vector<Rational> y(k);
  for (std::size_t r = 0; r < k; ++r) {
    Rational acc = 0;
    for (std::size_t j = 0; j < k; ++j) {
      if (map.inv[r][j] == 0) continue;
      acc += map.inv[r][j] * x.coeff(map.rows[j]);
    }
    y[r] = acc;
  }
  CycloElt result = CycloElt::from_rationals(cyclotomic_field(target), y);
  if (!(embed_up(result, m) == x)) {
    throw DomainError("descend: element does not lie in Q(zeta_" + std::to_string(target) + ")");
  }
  return result;
}

std::vector<GaloisElt> subfield_fixer(const FieldPtr& field, u64 sub) {
  const u64 m = field->conductor();
  if (sub == 0 || m % sub != 0) throw DomainError("subfield_fixer: conductor mismatch");
  std::vector<GaloisElt> out;
  for (u64 a : field->unit_group()) {
    if (a % sub == 1 % sub) out.emplace_back(field, static_cast<i64>(a));
  }
  return out;
}

CycloElt elt_inverse(const CycloElt& x) {
  if (x.is_zero()) throw ArithmeticError("division by zero");
  const FieldPtr& f = x.field();
  if (x.is_rational()) return CycloElt::from_rational(f, 1 / x.rational_value());
  const u64 m = f->conductor();
  if (f->degree() <= kEuclidInverseMaxDegree) {
    std::vector<Rational> c;
    for (const auto& v : x.numerators()) c.emplace_back(v);
    auto [g, u, v] = poly_extended_gcd(QPoly(std::move(c)), to_rational(f->cyclo_poly()));
    if (g.degree() != 0) throw InternalInconsistency("inverse: element shares a factor with Phi_m");
    CycloElt inv = CycloElt::from_rationals(f, u.coeffs());
    inv *= Rational(x.denominator());
    return inv;
  }
  const u64 sub = tower_step(m);
  auto [z, y] = norm_to_subfield(x, sub);
  return y * embed_up(elt_inverse(z), m);
}

CycloElt pow(const CycloElt& x, i64 e) {
  if (e < 0) return pow(elt_inverse(x), -e);
  CycloElt result = CycloElt::from_rational(x.field(), 1);
  CycloElt base = x;
  while (e > 0) {
    if (e & 1) result *= base;
    e >>= 1;
    if (e > 0) base *= base;
  }
  return result;
}

CycloElt inverse_one_minus_root(const FieldPtr& field, i64 e) {
  const u64 m = field->conductor();
  const u64 ex = mod_floor(e, m);
  const u64 d = m / gcd(m, ex);
  if (d == 1) throw ArithmeticError("division by zero: 1 - zeta^e vanishes");
  std::vector<Integer> num(m);
  for (u64 k = 1; k < d; ++k) num[mulmod(ex, k, m)] -= static_cast<unsigned long>(k);
  return CycloElt(field, std::move(num), Integer(static_cast<unsigned long>(d)));
}

CycloElt relative_norm(const CycloElt& x, const std::vector<GaloisElt>& subgroup) {
  if (subgroup.empty()) throw DomainError("relative_norm: empty subgroup");
  for (const auto& s : subgroup) {
    if (s.field()->conductor() != x.conductor()) throw DomainError("relative_norm: field mismatch");
  }
  auto contains = [&](const GaloisElt& g) {
    return std::find(subgroup.begin(), subgroup.end(), g) != subgroup.end();
  };
  for (const auto& s : subgroup) {
    for (const auto& t : subgroup) {
      if (!contains(s.compose(t))) throw DomainError("relative_norm: list is not closed under composition");
    }
  }
  CycloElt result = CycloElt::from_rational(x.field(), 1);
  for (const auto& s : subgroup) result *= galois_apply(s, x);
  for (const auto& s : subgroup) {
    if (!(galois_apply(s, result) == result)) throw InternalInconsistency("relative norm not fixed by subgroup");
  }
  return result;
}

Rational absolute_norm(const CycloElt& x) {
  if (x.is_zero()) return 0;
  if (x.is_rational()) return pow(x, static_cast<i64>(x.field()->degree())).rational_value();
  const u64 sub = tower_step(x.conductor());
  return absolute_norm(norm_to_subfield(x, sub).first) ;
}

bool is_in_real_subfield(const CycloElt& x) {
  const u64 m = x.conductor();
  if (m <= 2) return true;
  return galois_apply(m - 1, x) == x;
}

QPoly minimal_polynomial(const CycloElt& x) {
  const FieldPtr& f = x.field();
  std::vector<CycloElt> conj;
  for (u64 a : f->unit_group()) {
    CycloElt c = galois_apply(a, x);
    if (std::find(conj.begin(), conj.end(), c) == conj.end()) conj.push_back(std::move(c));
  }
  // prod (T - c) with field-valued coefficients, lowest degree first.
  std::vector<CycloElt> poly{CycloElt::from_rational(f, 1)};
  for (const auto& c : conj) {
    std::vector<CycloElt> next(poly.size() + 1, CycloElt(f));
    for (std::size_t i = 0; i < poly.size(); ++i) {
      next[i + 1] += poly[i];
      next[i] -= c * poly[i];
    }
    poly = std::move(next);
  }
  std::vector<Rational> coeffs;
  for (const auto& c : poly) {
    if (!c.is_rational()) throw InternalInconsistency("minimal polynomial has irrational coefficient");
    coeffs.push_back(c.rational_value());
  }
  return QPoly(std::move(coeffs));
}

}  // namespace kforge

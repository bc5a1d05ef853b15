#pragma once

// Dense univariate polynomials over an exact scalar ring, lowest degree first.
// The scalar is Integer or Rational in practice; division-based operations
// require a field and are constrained accordingly.

#include <algorithm>
#include <initializer_list>
#include <ostream>
#include <sstream>
#include <string>
#include <tuple>
#include <type_traits>
#include <utility>
#include <vector>

#include "kforge/error.hpp"
#include "kforge/ntheory.hpp"

namespace kforge {

template <class T>
inline constexpr bool is_field_v = std::is_same_v<T, Rational>;

template <class T>
class Poly {
 public:
  Poly() = default;
  Poly(std::initializer_list<T> c) : c_(c) { trim(); }
  explicit Poly(std::vector<T> c) : c_(std::move(c)) { trim(); }
  /// Constant polynomial.
  static Poly constant(const T& a) { return Poly(std::vector<T>{a}); }
  /// a * x^k
  static Poly monomial(const T& a, std::size_t k) {
    std::vector<T> c(k + 1, T(0));
    c[k] = a;
    return Poly(std::move(c));
  }

  bool is_zero() const { return c_.empty(); }
  /// Degree; -1 for the zero polynomial.
  long degree() const { return static_cast<long>(c_.size()) - 1; }
  const std::vector<T>& coeffs() const { return c_; }
  T coeff(std::size_t i) const { return i < c_.size() ? c_[i] : T(0); }
  const T& leading() const { return c_.back(); }
  bool is_monic() const { return !c_.empty() && c_.back() == 1; }

  T operator()(const T& x) const {
    T acc(0);
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + *it;
    return acc;
  }

  Poly derivative() const {
    if (c_.size() <= 1) return Poly();
    std::vector<T> d(c_.size() - 1);
    for (std::size_t i = 1; i < c_.size(); ++i) d[i - 1] = c_[i] * T(static_cast<long>(i));
    return Poly(std::move(d));
  }

  Poly& operator+=(const Poly& o) {
    if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), T(0));
    for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] += o.c_[i];
    trim();
    return *this;
  }
  Poly& operator-=(const Poly& o) {
    if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), T(0));
    for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] -= o.c_[i];
    trim();
    return *this;
  }
  Poly& operator*=(const T& a) {
    for (auto& x : c_) x *= a;
    trim();
    return *this;
  }

  friend Poly operator+(Poly a, const Poly& b) { return a += b; }
  friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
  friend Poly operator-(Poly a) {
    for (auto& x : a.c_) x = -x;
    return a;
  }
  friend Poly operator*(Poly a, const T& s) { return a *= s; }
  friend Poly operator*(const Poly& a, const Poly& b) {
    if (a.is_zero() || b.is_zero()) return Poly();
    std::vector<T> r(a.c_.size() + b.c_.size() - 1, T(0));
    for (std::size_t i = 0; i < a.c_.size(); ++i) {
      if (a.c_[i] == 0) continue;
      for (std::size_t j = 0; j < b.c_.size(); ++j) r[i + j] += a.c_[i] * b.c_[j];
    }
    return Poly(std::move(r));
  }
  friend bool operator==(const Poly& a, const Poly& b) { return a.c_ == b.c_; }

  Poly monic() const requires is_field_v<T> {
    if (is_zero()) return *this;
    Poly r = *this;
    T inv = T(1) / leading();
    for (auto& x : r.c_) x *= inv;
    return r;
  }

  /// Euclidean division: *this = q * d + r with deg r < deg d.
  std::pair<Poly, Poly> divmod(const Poly& d) const requires is_field_v<T> {
    if (d.is_zero()) throw ArithmeticError("polynomial division by zero");
    std::vector<T> r = c_;
    if (r.size() < d.c_.size()) return {Poly(), *this};
    std::vector<T> q(r.size() - d.c_.size() + 1, T(0));
    const T inv = T(1) / d.leading();
    for (std::size_t k = q.size(); k-- > 0;) {
      T f = r[k + d.c_.size() - 1] * inv;
      q[k] = f;
      if (f == 0) continue;
      for (std::size_t j = 0; j < d.c_.size(); ++j) r[k + j] -= f * d.c_[j];
    }
    r.resize(d.c_.size() - 1);
    return {Poly(std::move(q)), Poly(std::move(r))};
  }

  std::string to_string(const std::string& var = "x") const {
    if (is_zero()) return "0";
    std::ostringstream os;
    bool first = true;
    for (std::size_t i = c_.size(); i-- > 0;) {
      if (c_[i] == 0) continue;
      T a = c_[i];
      bool neg = a < 0;
      if (neg) a = -a;
      if (!first) os << (neg ? " - " : " + ");
      else if (neg) os << "-";
      first = false;
      if (i == 0 || a != 1) os << a.get_str();
      if (i > 0) os << var;
      if (i > 1) os << "^" << i;
    }
    return os.str();
  }

 private:
  void trim() {
    while (!c_.empty() && c_.back() == 0) c_.pop_back();
  }

  std::vector<T> c_;
};

using ZPoly = Poly<Integer>;
using QPoly = Poly<Rational>;

template <class T>
std::ostream& operator<<(std::ostream& os, const Poly<T>& p) {
  return os << p.to_string();
}

inline QPoly to_rational(const ZPoly& p) {
  std::vector<Rational> c;
  c.reserve(p.coeffs().size());
  for (const auto& x : p.coeffs()) c.emplace_back(x);
  return QPoly(std::move(c));
}

/// Result of the extended Euclidean algorithm: g = u*a + v*b, g monic.
struct PolyGcd {
  QPoly g, u, v;
};

/// Extended gcd over Q. Throws ArithmeticError("gcd of zero pair") when both are zero.
PolyGcd poly_extended_gcd(const QPoly& a, const QPoly& b);

}  // namespace kforge

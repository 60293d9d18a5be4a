#pragma once

// Dense univariate polynomials over exact coefficient rings (big integers or
// rationals), with the handful of operations the spectral code needs:
// Euclidean division over Q, gcd, square-free decomposition, cyclotomic
// polynomials and Sturm root counting.

#include <boost/multiprecision/cpp_int.hpp>

#include <algorithm>
#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "balans/words.hpp"

namespace balans {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

template <class T>
class Poly {
 public:
  Poly() = default;
  explicit Poly(std::vector<T> c) : c_(std::move(c)) { trim(); }
  Poly(std::initializer_list<T> c) : c_(c) { trim(); }

  static Poly monomial(std::size_t k, T coeff = T(1)) {
    std::vector<T> c(k + 1, T(0));
    c[k] = std::move(coeff);
    return Poly(std::move(c));
  }

  bool is_zero() const { return c_.empty(); }
  // Degree of the zero polynomial is reported as -1.
  long degree() const { return static_cast<long>(c_.size()) - 1; }
  const std::vector<T>& coeffs() const { return c_; }
  T coeff(std::size_t k) const { return k < c_.size() ? c_[k] : T(0); }
  const T& lead() const { return c_.back(); }

  template <class U>
  U eval(const U& x) const {
    U acc(0);
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + U(*it);
    return acc;
  }

  Poly derivative() const {
    std::vector<T> d;
    for (std::size_t k = 1; k < c_.size(); ++k) d.push_back(c_[k] * T(static_cast<long>(k)));
    return Poly(std::move(d));
  }

  // x^deg · p(1/x)
  Poly reversed() const { return Poly(std::vector<T>(c_.rbegin(), c_.rend())); }

  friend Poly operator+(const Poly& a, const Poly& b) {
    std::vector<T> r(std::max(a.c_.size(), b.c_.size()), T(0));
    for (std::size_t i = 0; i < a.c_.size(); ++i) r[i] += a.c_[i];
    for (std::size_t i = 0; i < b.c_.size(); ++i) r[i] += b.c_[i];
    return Poly(std::move(r));
  }
  friend Poly operator-(const Poly& a, const Poly& b) {
    std::vector<T> r(std::max(a.c_.size(), b.c_.size()), T(0));
    for (std::size_t i = 0; i < a.c_.size(); ++i) r[i] += a.c_[i];
    for (std::size_t i = 0; i < b.c_.size(); ++i) r[i] -= b.c_[i];
    return Poly(std::move(r));
  }
  friend Poly operator*(const Poly& a, const Poly& b) {
    if (a.is_zero() || b.is_zero()) return {};
    std::vector<T> r(a.c_.size() + b.c_.size() - 1, T(0));
    for (std::size_t i = 0; i < a.c_.size(); ++i)
      for (std::size_t j = 0; j < b.c_.size(); ++j) r[i + j] += a.c_[i] * b.c_[j];
    return Poly(std::move(r));
  }
  friend Poly operator*(const T& s, const Poly& p) {
    std::vector<T> r = p.c_;
    for (auto& x : r) x *= s;
    return Poly(std::move(r));
  }
  friend bool operator==(const Poly& a, const Poly& b) { return a.c_ == b.c_; }

 private:
  void trim() {
    while (!c_.empty() && c_.back() == T(0)) c_.pop_back();
  }
  std::vector<T> c_;
};

using IntPoly = Poly<BigInt>;
using RatPoly = Poly<Rational>;

inline RatPoly to_rational(const IntPoly& p) {
  std::vector<Rational> c;
  for (const auto& x : p.coeffs()) c.emplace_back(x);
  return RatPoly(std::move(c));
}

// Clears denominators and the content; the leading coefficient is made positive.
inline IntPoly primitive_part(const RatPoly& p) {
  if (p.is_zero()) return {};
  BigInt den = 1;
  for (const auto& x : p.coeffs()) {
    BigInt d = boost::multiprecision::denominator(x);
    den = den / boost::multiprecision::gcd(den, d) * d;
  }
  std::vector<BigInt> c;
  BigInt g = 0;
  for (const auto& x : p.coeffs()) {
    BigInt v = boost::multiprecision::numerator(x) * (den / boost::multiprecision::denominator(x));
    c.push_back(v);
    g = boost::multiprecision::gcd(g, v);
  }
  if (p.lead() < 0) g = -g;
  for (auto& x : c) x /= g;
  return IntPoly(std::move(c));
}

inline IntPoly primitive_part(const IntPoly& p) { return primitive_part(to_rational(p)); }

inline std::pair<RatPoly, RatPoly> divmod(const RatPoly& a, const RatPoly& b) {
  if (b.is_zero()) throw Error("polynomial division by zero");
  if (a.degree() < b.degree()) return {RatPoly{}, a};
  std::vector<Rational> rem = a.coeffs();
  std::vector<Rational> quo(a.coeffs().size() - b.coeffs().size() + 1, Rational(0));
  const std::size_t db = b.coeffs().size() - 1;
  for (std::size_t k = quo.size(); k-- > 0;) {
    Rational f = rem[k + db] / b.lead();
    quo[k] = f;
    if (f == 0) continue;
    for (std::size_t j = 0; j <= db; ++j) rem[k + j] -= f * b.coeffs()[j];
  }
  return {RatPoly(std::move(quo)), RatPoly(std::move(rem))};
}

// Quotient when b divides a in Z[x], nothing otherwise.
inline std::optional<IntPoly> divide_exact(const IntPoly& a, const IntPoly& b) {
  auto [q, r] = divmod(to_rational(a), to_rational(b));
  if (!r.is_zero()) return std::nullopt;
  std::vector<BigInt> c;
  for (const auto& x : q.coeffs()) {
    if (boost::multiprecision::denominator(x) != 1) return std::nullopt;
    c.push_back(boost::multiprecision::numerator(x));
  }
  return IntPoly(std::move(c));
}

inline IntPoly gcd(const IntPoly& a, const IntPoly& b) {
  RatPoly x = to_rational(a), y = to_rational(b);
  while (!y.is_zero()) {
    RatPoly r = divmod(x, y).second;
    x = std::move(y);
    y = std::move(r);
  }
  return primitive_part(x);
}

// Yun: p = c · Π s_i^i with s_i square-free and pairwise coprime. Entry i-1 holds s_i.
inline std::vector<IntPoly> squarefree_decomposition(const IntPoly& p) {
  std::vector<IntPoly> out;
  if (p.degree() < 1) return out;
  auto quo = [](const RatPoly& x, const RatPoly& y) { return divmod(x, y).first; };
  RatPoly f = to_rational(p);
  RatPoly a0 = to_rational(gcd(p, p.derivative()));
  RatPoly b = quo(f, a0);
  RatPoly c = quo(f.derivative(), a0);
  RatPoly d = c - b.derivative();
  while (b.degree() > 0) {
    RatPoly a = to_rational(gcd(primitive_part(b), primitive_part(d)));
    out.push_back(primitive_part(a));
    b = quo(b, a);
    c = quo(d, a);
    d = c - b.derivative();
  }
  while (!out.empty() && out.back().degree() == 0) out.pop_back();
  return out;
}

inline unsigned euler_phi(unsigned m) {
  unsigned r = m;
  for (unsigned p = 2; p * p <= m; ++p) {
    if (m % p) continue;
    while (m % p == 0) m /= p;
    r -= r / p;
  }
  if (m > 1) r -= r / m;
  return r;
}

// Long division by a monic divisor in Z[x]; nothing when the remainder is nonzero.
inline std::optional<IntPoly> divide_monic(const IntPoly& a, const IntPoly& b) {
  if (b.is_zero() || b.lead() != 1) throw Error("divisor must be monic");
  if (a.degree() < b.degree()) {
    if (a.is_zero()) return IntPoly{};
    return std::nullopt;
  }
  std::vector<BigInt> rem = a.coeffs();
  std::vector<BigInt> quo(rem.size() - b.coeffs().size() + 1);
  const std::size_t db = b.coeffs().size() - 1;
  for (std::size_t k = quo.size(); k-- > 0;) {
    BigInt f = rem[k + db];
    quo[k] = f;
    if (f == 0) continue;
    for (std::size_t j = 0; j <= db; ++j) rem[k + j] -= f * b.coeffs()[j];
  }
  for (std::size_t j = 0; j < db; ++j)
    if (rem[j] != 0) return std::nullopt;
  return IntPoly(std::move(quo));
}

inline int moebius(unsigned n) {
  int mu = 1;
  for (unsigned p = 2; p * p <= n; ++p) {
    if (n % p) continue;
    n /= p;
    if (n % p == 0) return 0;
    mu = -mu;
  }
  if (n > 1) mu = -mu;
  return mu;
}

// Φ_m = Π_{e | m} (x^e - 1)^{μ(m/e)}
inline IntPoly cyclotomic(unsigned m) {
  if (m == 0) throw Error("cyclotomic index must be positive");
  IntPoly num{BigInt(1)};
  std::vector<IntPoly> den;
  for (unsigned e = 1; e <= m; ++e) {
    if (m % e) continue;
    int mu = moebius(m / e);
    IntPoly f = IntPoly::monomial(e) - IntPoly{BigInt(1)};
    if (mu == 1) num = num * f;
    if (mu == -1) den.push_back(f);
  }
  for (const auto& f : den) num = *divide_monic(num, f);
  return num;
}

// Number of distinct real roots of a square-free p in the open interval (lo, hi),
// assuming neither endpoint is a root.
inline unsigned sturm_count(const IntPoly& p, const Rational& lo, const Rational& hi) {
  if (p.degree() < 1) return 0;
  std::vector<RatPoly> seq{to_rational(p), to_rational(p.derivative())};
  while (!seq.back().is_zero()) {
    RatPoly r = divmod(seq[seq.size() - 2], seq.back()).second;
    if (r.is_zero()) break;
    seq.push_back(Rational(-1) * r);
  }
  auto variations = [&](const Rational& x) {
    unsigned v = 0;
    int last = 0;
    for (const auto& s : seq) {
      Rational y = s.eval(x);
      int sg = y > 0 ? 1 : (y < 0 ? -1 : 0);
      if (sg == 0) continue;
      if (last != 0 && sg != last) ++v;
      last = sg;
    }
    return v;
  };
  if (p.eval(lo) == 0 || p.eval(hi) == 0) throw Error("sturm endpoint is a root");
  return variations(lo) - variations(hi);
}

template <class T>
std::string to_string(const Poly<T>& p, const std::string& var = "x") {
  if (p.is_zero()) return "0";
  std::string out;
  for (long k = p.degree(); k >= 0; --k) {
    T c = p.coeff(static_cast<std::size_t>(k));
    if (c == T(0)) continue;
    bool neg = c < T(0);
    T mag = neg ? T(-c) : c;
    if (out.empty()) {
      if (neg) out += "-";
    } else {
      out += neg ? " - " : " + ";
    }
    bool unit = mag == T(1);
    if (!unit || k == 0) out += mag.str();
    if (k > 0) {
      if (!unit) out += "*";
      out += var;
      if (k > 1) out += "^" + std::to_string(k);
    }
  }
  return out;
}

}  // namespace balans

#pragma once

// Exact integer matrices for substitutions: characteristic polynomials,
// root classification (zero / cyclotomic / integer / algebraic with certified
// modulus), Perron data and periods of M^n modulo q.

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_complex.hpp>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "balans/polynomial.hpp"
#include "balans/substitution.hpp"

namespace balans {

class IntegerMatrix {
 public:
  IntegerMatrix() = default;
  explicit IntegerMatrix(std::size_t dim) : dim_(dim), e_(dim * dim) {}
  IntegerMatrix(std::size_t dim, std::vector<BigInt> entries) : dim_(dim), e_(std::move(entries)) {
    if (e_.size() != dim * dim) throw Error("matrix entry count does not match dimension");
  }

  static IntegerMatrix identity(std::size_t dim) {
    IntegerMatrix m(dim);
    for (std::size_t i = 0; i < dim; ++i) m(i, i) = 1;
    return m;
  }

  std::size_t dim() const { return dim_; }
  BigInt& operator()(std::size_t r, std::size_t c) { return e_[r * dim_ + c]; }
  const BigInt& operator()(std::size_t r, std::size_t c) const { return e_[r * dim_ + c]; }

  IntegerMatrix transpose() const {
    IntegerMatrix t(dim_);
    for (std::size_t i = 0; i < dim_; ++i)
      for (std::size_t j = 0; j < dim_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  BigInt trace() const {
    BigInt t = 0;
    for (std::size_t i = 0; i < dim_; ++i) t += (*this)(i, i);
    return t;
  }

  std::vector<BigInt> column_sums() const {
    std::vector<BigInt> s(dim_);
    for (std::size_t i = 0; i < dim_; ++i)
      for (std::size_t j = 0; j < dim_; ++j) s[j] += (*this)(i, j);
    return s;
  }

  bool symmetric() const { return *this == transpose(); }

  std::vector<BigInt> apply(const std::vector<BigInt>& x) const {
    if (x.size() != dim_) throw Error("vector size does not match matrix");
    std::vector<BigInt> y(dim_);
    for (std::size_t i = 0; i < dim_; ++i)
      for (std::size_t j = 0; j < dim_; ++j)
        if ((*this)(i, j) != 0) y[i] += (*this)(i, j) * x[j];
    return y;
  }

  friend IntegerMatrix operator*(const IntegerMatrix& a, const IntegerMatrix& b) {
    if (a.dim_ != b.dim_) throw Error("matrix dimensions differ");
    IntegerMatrix c(a.dim_);
    for (std::size_t i = 0; i < a.dim_; ++i)
      for (std::size_t k = 0; k < a.dim_; ++k) {
        if (a(i, k) == 0) continue;
        for (std::size_t j = 0; j < a.dim_; ++j) c(i, j) += a(i, k) * b(k, j);
      }
    return c;
  }
  friend IntegerMatrix operator+(IntegerMatrix a, const IntegerMatrix& b) {
    for (std::size_t i = 0; i < a.e_.size(); ++i) a.e_[i] += b.e_[i];
    return a;
  }
  friend IntegerMatrix operator*(const BigInt& s, IntegerMatrix a) {
    for (auto& x : a.e_) x *= s;
    return a;
  }
  friend bool operator==(const IntegerMatrix&, const IntegerMatrix&) = default;

 private:
  std::size_t dim_ = 0;
  std::vector<BigInt> e_;
};

// entry(a, b) = |σ(b)|_a
inline IntegerMatrix substitution_matrix(const Substitution& s) {
  IntegerMatrix m(s.size());
  for (std::size_t b = 0; b < s.size(); ++b)
    for (Symbol a : s.image(b)) m(a, b) += 1;
  return m;
}

inline IntegerMatrix matrix_power(const IntegerMatrix& m, unsigned n) {
  IntegerMatrix r = IntegerMatrix::identity(m.dim()), base = m;
  while (n) {
    if (n & 1u) r = r * base;
    n >>= 1;
    if (n) base = base * base;
  }
  return r;
}

inline std::vector<BigInt> to_big(const AbelianVector& v) {
  return std::vector<BigInt>(v.counts.begin(), v.counts.end());
}

// |σ^n(w)| = 1ᵀ M^n ab(w), exactly.
inline BigInt image_length(const IntegerMatrix& m, const AbelianVector& w, unsigned n) {
  std::vector<BigInt> x = to_big(w);
  for (unsigned i = 0; i < n; ++i) x = m.apply(x);
  BigInt t = 0;
  for (const auto& v : x) t += v;
  return t;
}

inline bool is_primitive(const IntegerMatrix& m) {
  const std::size_t d = m.dim();
  std::vector<std::uint8_t> base(d * d), cur;
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) {
      if (m(i, j) < 0) return false;
      base[i * d + j] = m(i, j) != 0;
    }
  cur = base;
  const std::size_t bound = (d - 1) * (d - 1) + 1;
  for (std::size_t k = 1; k <= bound; ++k) {
    if (std::all_of(cur.begin(), cur.end(), [](std::uint8_t x) { return x != 0; })) return true;
    std::vector<std::uint8_t> next(d * d, 0);
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = 0; j < d; ++j)
        if (cur[i * d + j])
          for (std::size_t c = 0; c < d; ++c)
            if (base[j * d + c]) next[i * d + c] = 1;
    cur = std::move(next);
  }
  return false;
}

// Faddeev–LeVerrier: M_k = A·M_{k-1} + c_{d-k+1}·I, c_{d-k} = -tr(A·M_k)/k.
// Every division is exact over Z and is checked.
inline IntPoly char_poly(const IntegerMatrix& a) {
  const std::size_t d = a.dim();
  std::vector<BigInt> c(d + 1);
  c[d] = 1;
  IntegerMatrix mk(d);
  for (std::size_t k = 1; k <= d; ++k) {
    mk = a * mk + c[d - k + 1] * IntegerMatrix::identity(d);
    BigInt t = (a * mk).trace();
    if (t % k != 0) throw Error("characteristic polynomial: inexact division");
    c[d - k] = -t / k;
  }
  return IntPoly(std::move(c));
}

using Float = boost::multiprecision::cpp_bin_float_100;
using Complex = boost::multiprecision::cpp_complex_100;

enum class RootKind { Zero, RootOfUnity, Integer, Algebraic };

struct Root {
  RootKind kind = RootKind::Algebraic;
  std::complex<double> approx;
  unsigned multiplicity = 1;
  unsigned order = 0;  // m for a primitive m-th root of unity
  BigInt integer;      // for RootKind::Integer
  // Certified modulus enclosure; exact for the non-algebraic kinds.
  double modulus_lo = 0, modulus_hi = 0;
  // -1 inside the unit circle, 0 on it, +1 outside; decided exactly.
  int unit_side = 0;
};

struct Spectrum {
  IntPoly char_poly;
  unsigned zero_multiplicity = 0;
  std::vector<std::pair<unsigned, unsigned>> cyclotomic;  // (m, exponent)
  std::vector<std::pair<BigInt, unsigned>> integer_roots;  // |r| >= 2
  IntPoly residual;  // what is left, with multiplicity
  std::vector<Root> roots;  // one entry per distinct root

  std::vector<unsigned> root_of_unity_orders() const {
    std::vector<unsigned> out;
    for (const auto& [m, e] : cyclotomic) out.push_back(m);
    return out;
  }
};

namespace detail {

inline double to_double(const Float& x) { return x.convert_to<double>(); }

// Aberth–Ehrlich on a square-free integer polynomial, in 100-digit arithmetic,
// followed by Weierstrass inclusion radii. Returns (centre, radius) pairs whose
// disks are pairwise disjoint, so each holds exactly one root.
inline std::vector<std::pair<Complex, Float>> isolate_roots(const IntPoly& p) {
  const long n = p.degree();
  std::vector<std::pair<Complex, Float>> out;
  if (n < 1) return out;
  std::vector<Float> c;
  for (const auto& x : p.coeffs()) c.emplace_back(x);
  std::vector<Float> dc;
  for (long k = 1; k <= n; ++k) dc.push_back(c[k] * k);

  auto horner = [](const std::vector<Float>& cs, const Complex& z) {
    Complex acc(0);
    for (auto it = cs.rbegin(); it != cs.rend(); ++it) acc = acc * z + Complex(*it);
    return acc;
  };

  Float bound = 0;
  for (long k = 0; k < n; ++k) bound = std::max(bound, Float(abs(c[k] / c[n])));
  bound += 1;

  std::vector<Complex> z(n);
  for (long k = 0; k < n; ++k) {
    Float ang = 2 * boost::math::constants::pi<Float>() * k / n + Float(0.4);
    z[k] = Complex(bound * cos(ang) / 2, bound * sin(ang) / 2);
  }
  const Float tol("1e-85");
  for (int iter = 0; iter < 2000; ++iter) {
    Float worst = 0;
    for (long k = 0; k < n; ++k) {
      Complex pv = horner(c, z[k]);
      if (abs(pv) == 0) continue;
      Complex ratio = pv / horner(dc, z[k]);
      Complex s(0);
      for (long j = 0; j < n; ++j)
        if (j != k) s += Complex(1) / (z[k] - z[j]);
      Complex step = ratio / (Complex(1) - ratio * s);
      z[k] -= step;
      worst = std::max(worst, Float(abs(step)));
    }
    if (worst < tol) break;
  }

  const Float eps("1e-95");
  for (long k = 0; k < n; ++k) {
    Complex pv = horner(c, z[k]);
    Float mag = abs(z[k]), scale = 0, pw = 1;
    for (long i = 0; i <= n; ++i) {
      scale += abs(c[i]) * pw;
      pw *= mag;
    }
    Float prod = abs(c[n]);
    for (long j = 0; j < n; ++j)
      if (j != k) prod *= abs(z[k] - z[j]);
    if (prod == 0) throw Error("root isolation failed");
    Float r = n * (abs(pv) + scale * eps * (n + 1)) / prod + eps;
    out.emplace_back(z[k], r);
  }
  for (long i = 0; i < n; ++i)
    for (long j = i + 1; j < n; ++j)
      if (abs(out[i].first - out[j].first) <= out[i].second + out[j].second) throw Error("root isolation failed");
  return out;
}

// Number of roots on the unit circle of a square-free integer polynomial with
// no roots at 0, 1 or -1: the unit-circle roots are roots of g = gcd(s, rev s),
// which is palindromic of even degree 2m; x^{-m} g(x) = h(x + 1/x) and each
// real root of h in (-2, 2) gives a conjugate pair on the circle.
inline unsigned unit_circle_root_count(const IntPoly& s) {
  IntPoly g = gcd(s, s.reversed());
  if (g.degree() < 1) return 0;
  if (g.degree() % 2 != 0) throw Error("modulus-1 ambiguity");
  const std::size_t m = static_cast<std::size_t>(g.degree() / 2);
  // P_0 = 2 is handled by using the plain constant; P_1 = y; P_{j+1} = y P_j - P_{j-1}.
  std::vector<IntPoly> P{IntPoly{BigInt(2)}, IntPoly{BigInt(0), BigInt(1)}};
  const IntPoly y{BigInt(0), BigInt(1)};
  for (std::size_t j = 2; j <= m; ++j) P.push_back(y * P[j - 1] - P[j - 2]);
  IntPoly h{g.coeff(m)};
  for (std::size_t j = 1; j <= m; ++j) h = h + g.coeff(m + j) * P[j];
  return 2 * sturm_count(h, Rational(-2), Rational(2));
}

}  // namespace detail

// Exact factor bookkeeping plus certified root enclosures. `root_bound` caps
// the search for integer roots (any bound on the spectral radius works).
inline Spectrum spectrum(const IntPoly& cp, std::optional<BigInt> root_bound = std::nullopt) {
  if (cp.degree() < 1) throw Error("spectrum of a constant polynomial");
  Spectrum sp;
  sp.char_poly = cp;
  IntPoly rest = cp;
  while (rest.coeff(0) == 0) {
    rest = IntPoly(std::vector<BigInt>(rest.coeffs().begin() + 1, rest.coeffs().end()));
    ++sp.zero_multiplicity;
  }
  if (sp.zero_multiplicity) {
    Root r;
    r.kind = RootKind::Zero;
    r.multiplicity = sp.zero_multiplicity;
    r.unit_side = -1;
    sp.roots.push_back(r);
  }

  const long deg0 = rest.degree();
  for (unsigned m = 1; deg0 > 0 && m <= 2u * static_cast<unsigned>(deg0 * deg0) + 2; ++m) {
    if (static_cast<long>(euler_phi(m)) > rest.degree()) continue;
    IntPoly phi = cyclotomic(m);
    unsigned e = 0;
    while (auto q = divide_monic(rest, phi)) {
      rest = *q;
      ++e;
    }
    if (!e) continue;
    sp.cyclotomic.emplace_back(m, e);
    for (unsigned k = 0; k < m; ++k) {
      if (std::gcd(k, m) != 1) continue;
      Root r;
      r.kind = RootKind::RootOfUnity;
      r.order = m;
      r.multiplicity = e;
      r.approx = std::polar(1.0, 2 * M_PI * k / m);
      r.modulus_lo = r.modulus_hi = 1;
      r.unit_side = 0;
      sp.roots.push_back(r);
    }
  }

  if (rest.degree() >= 1) {
    BigInt bound;
    if (root_bound) {
      bound = *root_bound;
    } else {
      double f = 0;
      const double lead = std::abs(rest.lead().convert_to<double>());
      for (long k = 1; k <= rest.degree(); ++k) {
        double ck = std::abs(rest.coeff(static_cast<std::size_t>(rest.degree() - k)).convert_to<double>()) / lead;
        f = std::max(f, std::pow(ck, 1.0 / k));
      }
      bound = BigInt(static_cast<long long>(std::ceil(2 * f)) + 1);
    }
    for (BigInt r = 2; r <= bound && rest.degree() >= 1; ++r) {
      for (int sgn : {1, -1}) {
        BigInt root = sgn * r;
        if (rest.coeff(0) % root != 0) continue;
        unsigned e = 0;
        const IntPoly lin{-root, BigInt(1)};
        while (rest.degree() >= 1) {
          auto q = divide_monic(rest, lin);
          if (!q) break;
          rest = *q;
          ++e;
        }
        if (!e) continue;
        sp.integer_roots.emplace_back(root, e);
        Root rt;
        rt.kind = RootKind::Integer;
        rt.integer = root;
        rt.multiplicity = e;
        rt.approx = root.convert_to<double>();
        rt.modulus_lo = rt.modulus_hi = std::abs(rt.approx.real());
        rt.unit_side = 1;
        sp.roots.push_back(rt);
      }
    }
  }
  sp.residual = rest;

  if (rest.degree() >= 1) {
    auto parts = squarefree_decomposition(rest);
    for (std::size_t i = 0; i < parts.size(); ++i) {
      const IntPoly& s = parts[i];
      if (s.degree() < 1) continue;
      auto disks = detail::isolate_roots(s);
      const unsigned on_circle = detail::unit_circle_root_count(s);
      std::vector<Root> batch;
      unsigned straddling = 0;
      for (const auto& [z, rad] : disks) {
        Root r;
        r.kind = RootKind::Algebraic;
        r.multiplicity = static_cast<unsigned>(i + 1);
        r.approx = {detail::to_double(z.real()), detail::to_double(z.imag())};
        Float mod = abs(z);
        Float lo = mod - rad, hi = mod + rad;
        r.modulus_lo = detail::to_double(std::max(lo, Float(0)));
        r.modulus_hi = detail::to_double(hi);
        if (hi < 1) {
          r.unit_side = -1;
        } else if (lo > 1) {
          r.unit_side = 1;
        } else {
          r.unit_side = 0;
          ++straddling;
        }
        batch.push_back(r);
      }
      if (straddling != on_circle) throw Error("modulus-1 ambiguity");
      sp.roots.insert(sp.roots.end(), batch.begin(), batch.end());
    }
  }
  return sp;
}

inline Spectrum spectrum(const IntegerMatrix& m) {
  BigInt bound = 0;
  bool nonneg = true;
  for (std::size_t i = 0; i < m.dim(); ++i)
    for (std::size_t j = 0; j < m.dim(); ++j) nonneg = nonneg && m(i, j) >= 0;
  if (nonneg) {
    for (const auto& s : m.column_sums()) bound = std::max(bound, s);
    return spectrum(char_poly(m), bound);
  }
  return spectrum(char_poly(m));
}

// Eigenvalues as a flat multiset (approximations), for display and tests.
inline std::vector<std::complex<double>> eigenvalues(const Spectrum& sp) {
  std::vector<std::complex<double>> out;
  for (const auto& r : sp.roots)
    for (unsigned k = 0; k < r.multiplicity; ++k) out.push_back(r.approx);
  return out;
}

enum class PisotClass { Pisot, SecondEigenvalueOutside, UnitModulusNonRootOfUnity, RootOfUnityPresent };

inline const char* to_string(PisotClass c) {
  switch (c) {
    case PisotClass::Pisot:
      return "Pisot";
    case PisotClass::SecondEigenvalueOutside:
      return "SecondEigenvalueOutside";
    case PisotClass::UnitModulusNonRootOfUnity:
      return "UnitModulusNonRootOfUnity";
    case PisotClass::RootOfUnityPresent:
      return "RootOfUnityPresent";
  }
  return "?";
}

struct PerronData {
  bool exact = false;
  BigInt integer_value;  // when exact
  double value = 0;
  double value_lo = 0, value_hi = 0;
  std::vector<Rational> exact_vector;  // sums to 1, when exact
  std::vector<double> vector;          // always filled
  double residual = 0;                 // ‖Mx - λx‖∞ of the float vector
  std::size_t root_index = 0;          // position in Spectrum::roots
};

namespace detail {

// Basis of the rational kernel of A (row reduction over Q).
inline std::vector<std::vector<Rational>> kernel(const std::vector<std::vector<Rational>>& a, std::size_t cols) {
  std::vector<std::vector<Rational>> m = a;
  std::vector<long> pivot_col;
  std::size_t row = 0;
  for (std::size_t c = 0; c < cols && row < m.size(); ++c) {
    std::size_t p = row;
    while (p < m.size() && m[p][c] == 0) ++p;
    if (p == m.size()) continue;
    std::swap(m[p], m[row]);
    Rational inv = 1 / m[row][c];
    for (auto& x : m[row]) x *= inv;
    for (std::size_t r = 0; r < m.size(); ++r) {
      if (r == row || m[r][c] == 0) continue;
      Rational f = m[r][c];
      for (std::size_t k = 0; k < cols; ++k) m[r][k] -= f * m[row][k];
    }
    pivot_col.push_back(static_cast<long>(c));
    ++row;
  }
  std::vector<std::vector<Rational>> basis;
  std::vector<bool> is_pivot(cols, false);
  for (long c : pivot_col) is_pivot[static_cast<std::size_t>(c)] = true;
  for (std::size_t f = 0; f < cols; ++f) {
    if (is_pivot[f]) continue;
    std::vector<Rational> v(cols, Rational(0));
    v[f] = 1;
    for (std::size_t r = 0; r < pivot_col.size(); ++r) v[static_cast<std::size_t>(pivot_col[r])] = -m[r][f];
    basis.push_back(std::move(v));
  }
  return basis;
}

// Inverse iteration in long double for the eigenvector of an approximate eigenvalue.
inline std::vector<double> float_eigenvector(const IntegerMatrix& m, long double lambda, double& residual) {
  const std::size_t d = m.dim();
  std::vector<long double> x(d, 1.0L);
  for (int it = 0; it < 6; ++it) {
    std::vector<std::vector<long double>> a(d, std::vector<long double>(d + 1));
    for (std::size_t i = 0; i < d; ++i) {
      for (std::size_t j = 0; j < d; ++j) a[i][j] = m(i, j).convert_to<long double>() - (i == j ? lambda : 0.0L);
      a[i][d] = x[i];
    }
    for (std::size_t c = 0; c < d; ++c) {
      std::size_t p = c;
      for (std::size_t r = c + 1; r < d; ++r)
        if (std::fabs(a[r][c]) > std::fabs(a[p][c])) p = r;
      std::swap(a[p], a[c]);
      if (a[c][c] == 0) a[c][c] = 1e-30L;
      for (std::size_t r = c + 1; r < d; ++r) {
        long double f = a[r][c] / a[c][c];
        for (std::size_t k = c; k <= d; ++k) a[r][k] -= f * a[c][k];
      }
    }
    std::vector<long double> y(d);
    for (std::size_t i = d; i-- > 0;) {
      long double s = a[i][d];
      for (std::size_t k = i + 1; k < d; ++k) s -= a[i][k] * y[k];
      y[i] = s / a[i][i];
    }
    long double total = 0;
    for (auto v : y) total += v;
    for (std::size_t i = 0; i < d; ++i) x[i] = y[i] / total;
  }
  long double worst = 0;
  for (std::size_t i = 0; i < d; ++i) {
    long double s = -lambda * x[i];
    for (std::size_t j = 0; j < d; ++j) s += m(i, j).convert_to<long double>() * x[j];
    worst = std::max(worst, std::fabs(s));
  }
  residual = static_cast<double>(worst);
  return std::vector<double>(x.begin(), x.end());
}

}  // namespace detail

inline PerronData perron_data(const IntegerMatrix& m, const Spectrum& sp) {
  if (!is_primitive(m)) throw Error("matrix is not primitive");
  const std::size_t d = m.dim();
  PerronData pd;
  for (std::size_t idx = 0; idx < sp.roots.size(); ++idx) {
    const Root& r = sp.roots[idx];
    if (r.kind != RootKind::Integer || r.integer <= 0) continue;
    std::vector<std::vector<Rational>> a(d, std::vector<Rational>(d));
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = 0; j < d; ++j) a[i][j] = Rational(m(i, j) - (i == j ? r.integer : BigInt(0)));
    auto ker = detail::kernel(a, d);
    if (ker.size() != 1) continue;
    Rational total = 0;
    for (const auto& x : ker[0]) total += x;
    if (total == 0) continue;
    std::vector<Rational> v;
    for (const auto& x : ker[0]) v.push_back(x / total);
    if (!std::all_of(v.begin(), v.end(), [](const Rational& x) { return x > 0; })) continue;
    pd.exact = true;
    pd.integer_value = r.integer;
    pd.value = pd.value_lo = pd.value_hi = r.integer.convert_to<double>();
    pd.exact_vector = v;
    for (const auto& x : v) pd.vector.push_back(x.convert_to<double>());
    pd.root_index = idx;
    return pd;
  }
  std::size_t best = sp.roots.size();
  for (std::size_t idx = 0; idx < sp.roots.size(); ++idx) {
    const Root& r = sp.roots[idx];
    if (r.kind != RootKind::Algebraic) continue;
    if (best == sp.roots.size() || r.modulus_lo > sp.roots[best].modulus_lo) best = idx;
  }
  if (best == sp.roots.size()) throw Error("no Perron root found");
  for (std::size_t idx = 0; idx < sp.roots.size(); ++idx)
    if (idx != best && sp.roots[idx].modulus_hi >= sp.roots[best].modulus_lo) throw Error("Perron root not separated");
  const Root& pr = sp.roots[best];
  pd.value = pr.approx.real();
  pd.value_lo = pr.modulus_lo;
  pd.value_hi = pr.modulus_hi;
  pd.root_index = best;
  pd.vector = detail::float_eigenvector(m, static_cast<long double>(pr.approx.real()), pd.residual);
  if (!(pd.residual < 1e-12)) throw Error("Perron vector residual too large");
  return pd;
}

inline PerronData perron_data(const IntegerMatrix& m) { return perron_data(m, spectrum(m)); }

// Assumes m primitive; the Perron root is excluded from the test.
inline PisotClass pisot_classify(const IntegerMatrix& m, const Spectrum& sp, const PerronData& pd) {
  bool outside = false, unit_other = false, unity = false;
  for (std::size_t idx = 0; idx < sp.roots.size(); ++idx) {
    const Root& r = sp.roots[idx];
    const unsigned extra = idx == pd.root_index ? r.multiplicity - 1 : r.multiplicity;
    if (extra == 0) continue;
    switch (r.kind) {
      case RootKind::Zero:
        break;
      case RootKind::RootOfUnity:
        unity = true;
        break;
      case RootKind::Integer:
        outside = true;
        break;
      case RootKind::Algebraic:
        if (r.unit_side > 0) outside = true;
        if (r.unit_side == 0) unit_other = true;
        break;
    }
  }
  (void)m;
  if (outside) return PisotClass::SecondEigenvalueOutside;
  if (unit_other) return PisotClass::UnitModulusNonRootOfUnity;
  if (unity) return PisotClass::RootOfUnityPresent;
  return PisotClass::Pisot;
}

inline PisotClass pisot_classify(const IntegerMatrix& m) {
  Spectrum sp = spectrum(m);
  return pisot_classify(m, sp, perron_data(m, sp));
}

struct ModularPeriod {
  std::uint64_t modulus = 0;
  std::size_t preperiod = 0;
  std::size_t period = 0;
  // M^n mod q for n = preperiod .. preperiod+period-1, row-major.
  std::vector<std::vector<std::uint64_t>> cycle;

  // M^n mod q for any n >= preperiod.
  const std::vector<std::uint64_t>& at(std::size_t n) const {
    if (n < preperiod) throw Error("level precedes the eventual cycle");
    return cycle[(n - preperiod) % period];
  }
};

namespace detail {

inline std::vector<std::uint64_t> mulmod(const std::vector<std::uint64_t>& a, const std::vector<std::uint64_t>& b,
                                         std::size_t d, std::uint64_t q) {
  std::vector<std::uint64_t> c(d * d, 0);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t k = 0; k < d; ++k) {
      if (!a[i * d + k]) continue;
      for (std::size_t j = 0; j < d; ++j) {
        unsigned __int128 t = static_cast<unsigned __int128>(a[i * d + k]) * b[k * d + j] + c[i * d + j];
        c[i * d + j] = static_cast<std::uint64_t>(t % q);
      }
    }
  return c;
}

inline std::uint64_t reduce(const BigInt& x, std::uint64_t q) {
  BigInt r = x % q;
  if (r < 0) r += q;
  return r.convert_to<std::uint64_t>();
}

}  // namespace detail

inline ModularPeriod power_mod_period(const IntegerMatrix& m, std::uint64_t q, std::size_t max_states = 1u << 20) {
  if (q < 2) throw Error("modulus must be at least 2");
  const std::size_t d = m.dim();
  std::vector<std::uint64_t> base(d * d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) base[i * d + j] = detail::reduce(m(i, j), q);
  std::vector<std::uint64_t> cur(d * d, 0);
  for (std::size_t i = 0; i < d; ++i) cur[i * d + i] = 1 % q;
  std::map<std::vector<std::uint64_t>, std::size_t> seen;
  std::vector<std::vector<std::uint64_t>> history;
  for (std::size_t n = 0;; ++n) {
    auto [it, fresh] = seen.emplace(cur, n);
    if (!fresh) {
      ModularPeriod mp;
      mp.modulus = q;
      mp.preperiod = it->second;
      mp.period = n - it->second;
      mp.cycle.assign(history.begin() + static_cast<long>(mp.preperiod), history.end());
      return mp;
    }
    if (n >= max_states) throw Error("modular period search exceeded its state budget");
    history.push_back(cur);
    cur = detail::mulmod(cur, base, d, q);
  }
}

// (1ᵀ M^n x) mod q
inline std::uint64_t length_residue(const ModularPeriod& mp, const std::vector<BigInt>& x, std::size_t n) {
  const auto& mat = mp.at(n);
  const std::size_t d = x.size();
  unsigned __int128 acc = 0;
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) {
      acc += static_cast<unsigned __int128>(mat[i * d + j]) * detail::reduce(x[j], mp.modulus);
      acc %= mp.modulus;
    }
  return static_cast<std::uint64_t>(acc);
}

}  // namespace balans

#pragma once

// Letter and factor frequencies (Perron vectors of M_σ and M_{σ_k}), tower
// statistics of the partitions {T^j σ^n[ab]} and the scaled cocycle values qφ.

#include <cstddef>
#include <map>
#include <optional>
#include <vector>

#include "balans/linalg.hpp"
#include "balans/substitution.hpp"

namespace balans {

struct Frequency {
  bool exact = false;
  Rational value;  // meaningful when exact
  double approx = 0;
};

struct FrequencyTable {
  std::size_t order = 0;
  std::vector<Word> words;  // L_order in lexicographic order
  std::vector<Frequency> values;

  bool all_exact() const {
    for (const auto& f : values)
      if (!f.exact) return false;
    return true;
  }

  const Frequency& at(WordView w) const {
    for (std::size_t i = 0; i < words.size(); ++i)
      if (std::equal(words[i].begin(), words[i].end(), w.begin(), w.end())) return values[i];
    throw Error("pattern not in language");
  }
};

// Perron data of m whose dominant eigenvalue is already known (from a
// substitution with the same Perron root).
inline PerronData perron_data_at(const IntegerMatrix& m, const PerronData& known) {
  const std::size_t d = m.dim();
  PerronData pd;
  if (known.exact) {
    std::vector<std::vector<Rational>> a(d, std::vector<Rational>(d));
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = 0; j < d; ++j) a[i][j] = Rational(m(i, j) - (i == j ? known.integer_value : BigInt(0)));
    auto ker = detail::kernel(a, d);
    if (ker.size() != 1) throw Error("Perron eigenspace is not one-dimensional");
    Rational total = 0;
    for (const auto& x : ker[0]) total += x;
    for (const auto& x : ker[0]) pd.exact_vector.push_back(x / total);
    for (const auto& x : pd.exact_vector) {
      if (x <= 0) throw Error("Perron vector is not positive");
      pd.vector.push_back(x.convert_to<double>());
    }
    pd.exact = true;
    pd.integer_value = known.integer_value;
    pd.value = pd.value_lo = pd.value_hi = known.value;
    return pd;
  }
  pd = known;
  pd.exact_vector.clear();
  pd.vector = detail::float_eigenvector(m, static_cast<long double>(known.value), pd.residual);
  if (!(pd.residual < 1e-12)) throw Error("Perron vector residual too large");
  return pd;
}

inline FrequencyTable table_from(std::size_t order, std::vector<Word> words, const PerronData& pd) {
  FrequencyTable t;
  t.order = order;
  t.words = std::move(words);
  for (std::size_t i = 0; i < t.words.size(); ++i) {
    Frequency f;
    f.exact = pd.exact;
    if (pd.exact) f.value = pd.exact_vector[i];
    f.approx = pd.vector[i];
    t.values.push_back(f);
  }
  return t;
}

inline FrequencyTable letter_frequencies(const Substitution& s) {
  require_primitive(s, "substitution is not primitive");
  std::vector<Word> words;
  for (Symbol a = 0; a < s.size(); ++a) words.push_back(Word{a});
  return table_from(1, std::move(words), perron_data(substitution_matrix(s)));
}

inline FrequencyTable factor_frequencies(const Substitution& s, std::size_t k) {
  if (k == 0) throw Error("factor length must be positive");
  if (k == 1) return letter_frequencies(s);
  require_primitive(s, "substitution is not primitive");
  PerronData base = perron_data(substitution_matrix(s));
  BlockSubstitution bs = k_block_substitution(s, k);
  PerronData pd = perron_data_at(substitution_matrix(bs.substitution), base);
  return table_from(k, bs.coding.decode, pd);
}

inline Frequency factor_frequency(const Substitution& s, WordView v) {
  if (v.empty()) throw Error("empty pattern");
  return factor_frequencies(s, v.size()).at(v);
}

inline Rational exact_frequency(const Substitution& s, WordView v) {
  Frequency f = factor_frequency(s, v);
  if (!f.exact) throw Error("requires rational frequency");
  return f.value;
}

// Smallest k >= 1 with min_a |σ^k(a)| >= len.
inline unsigned constancy_level(const Substitution& s, std::size_t len) { return level_for_length(s, len, 1); }

// k + |L_2|: the level from which the potential and divisibility criteria apply.
inline unsigned admissible_level(const Substitution& s, std::size_t len) {
  return constancy_level(s, len) + static_cast<unsigned>(two_letter_language(s).size());
}

struct TowerStats {
  unsigned level = 0;
  std::vector<Word> blocks;     // L_2, lexicographic
  std::vector<BigInt> heights;  // |σ^n(a)| for block ab
  std::vector<BigInt> alpha;    // occurrences of v at j < |σ^n(a)| in σ^n(ab)
};

constexpr std::size_t literal_scan_limit = std::size_t{1} << 25;

// Direct scan of σ^n(ab) for every ab in L_2.
inline TowerStats alpha_counts(const Substitution& s, WordView v, unsigned n) {
  if (v.empty()) throw Error("empty pattern");
  auto lens = image_lengths(s, n);
  if (*std::min_element(lens.begin(), lens.end()) < v.size()) throw Error("level does not resolve pattern");
  TowerStats ts;
  ts.level = n;
  for (const auto& ab : two_letter_language(s)) {
    if (lens[ab[0]] + lens[ab[1]] > literal_scan_limit) throw Error("level too large for a literal scan");
    Word w = s.apply_power(ab, n);
    const std::size_t h = lens[ab[0]];
    std::size_t count = 0;
    for_each_occurrence(WordView(w).first(h + v.size() - 1), v, [&](std::size_t j) { count += j < h; });
    ts.blocks.push_back(ab);
    ts.heights.emplace_back(h);
    ts.alpha.emplace_back(count);
  }
  return ts;
}

struct PhiVector {
  Word pattern;
  BigInt p, q;  // μ_v = p/q
  unsigned level = 0;
  std::vector<Word> blocks;
  std::vector<BigInt> qphi;  // q·α_ab − p·|σ^n(a)|

  BigInt at(WordView ab) const {
    for (std::size_t i = 0; i < blocks.size(); ++i)
      if (std::equal(blocks[i].begin(), blocks[i].end(), ab.begin(), ab.end())) return qphi[i];
    throw Error("block not in language");
  }
};

// φ_{n+1}(ab) = Σ_cd M_{σ_2}(cd, ab) φ_n(cd), valid once σ^n resolves v.
inline std::vector<BigInt> transport(const IntegerMatrix& m2, const std::vector<BigInt>& phi, unsigned steps) {
  IntegerMatrix t = m2.transpose();
  std::vector<BigInt> x = phi;
  for (unsigned i = 0; i < steps; ++i) x = t.apply(x);
  return x;
}

inline PhiVector phi_from_tower(const TowerStats& ts, WordView v, const Rational& mu) {
  PhiVector ph;
  ph.pattern.assign(v.begin(), v.end());
  ph.p = boost::multiprecision::numerator(mu);
  ph.q = boost::multiprecision::denominator(mu);
  ph.level = ts.level;
  ph.blocks = ts.blocks;
  for (std::size_t i = 0; i < ts.blocks.size(); ++i) ph.qphi.push_back(ph.q * ts.alpha[i] - ph.p * ts.heights[i]);
  return ph;
}

// Literal scan at the smallest resolving level, transported to level n.
inline PhiVector phi_vector(const Substitution& s, WordView v, unsigned n, const Rational& mu) {
  const unsigned base = level_for_length(s, v.size());
  if (n < base) throw Error("level does not resolve pattern");
  PhiVector ph = phi_from_tower(alpha_counts(s, v, base), v, mu);
  if (n > base) {
    IntegerMatrix m2 = substitution_matrix(two_block_substitution(s).substitution);
    ph.qphi = transport(m2, ph.qphi, n - base);
    ph.level = n;
  }
  return ph;
}

inline PhiVector phi_vector(const Substitution& s, WordView v, unsigned n) {
  return phi_vector(s, v, n, exact_frequency(s, v));
}

// Σ_{j < |σ^n(a)|} (q·[v occurs at j] − p) evaluated term by term.
inline std::vector<BigInt> phi_literal_sum(const Substitution& s, WordView v, unsigned n, const Rational& mu) {
  const BigInt p = boost::multiprecision::numerator(mu), q = boost::multiprecision::denominator(mu);
  auto lens = image_lengths(s, n);
  if (*std::min_element(lens.begin(), lens.end()) < v.size()) throw Error("level does not resolve pattern");
  std::vector<BigInt> out;
  for (const auto& ab : two_letter_language(s)) {
    if (lens[ab[0]] + lens[ab[1]] > literal_scan_limit) throw Error("level too large for a literal scan");
    Word w = s.apply_power(ab, n);
    BigInt sum = 0;
    for (std::size_t j = 0; j < lens[ab[0]]; ++j) {
      bool hit = std::equal(v.begin(), v.end(), w.begin() + static_cast<long>(j));
      sum += hit ? BigInt(q - p) : BigInt(-p);
    }
    out.push_back(sum);
  }
  return out;
}

}  // namespace balans

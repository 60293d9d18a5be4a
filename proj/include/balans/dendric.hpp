#pragma once

// Extension graphs, finite-length dendricity screens, Arnoux–Rauzy directive
// words, and decompositions of cylinder indicators into shifted letter
// indicators (solved on extension trees by leaf peeling).

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "balans/balance.hpp"
#include "balans/substitution.hpp"

namespace balans {

struct ExtensionGraph {
  Word center;
  std::vector<Symbol> left;   // L(w)
  std::vector<Symbol> right;  // R(w)
  std::vector<std::pair<Symbol, Symbol>> edges;

  bool connected() const {
    if (left.empty() || right.empty()) return false;
    const std::size_t nl = left.size(), n = nl + right.size();
    std::vector<std::size_t> root(n);
    std::iota(root.begin(), root.end(), 0);
    auto find = [&](std::size_t x) {
      while (root[x] != x) x = root[x] = root[root[x]];
      return x;
    };
    std::size_t components = n;
    for (const auto& [a, b] : edges) {
      std::size_t i = std::lower_bound(left.begin(), left.end(), a) - left.begin();
      std::size_t j = nl + (std::lower_bound(right.begin(), right.end(), b) - right.begin());
      std::size_t x = find(i), y = find(j);
      if (x != y) {
        root[x] = y;
        --components;
      }
    }
    return components == 1;
  }

  bool is_tree() const { return connected() && edges.size() + 1 == left.size() + right.size(); }

  // "tree", "disconnected" or "has-cycle".
  std::string verdict() const {
    if (!connected()) return "disconnected";
    return is_tree() ? "tree" : "has-cycle";
  }

  std::string describe(const Alphabet& al) const {
    std::ostringstream os;
    os << "E(" << al.format(center) << "): edges";
    for (const auto& [a, b] : edges) os << " (" << al.name(a) << "," << al.name(b) << ")";
    return os.str();
  }
};

inline ExtensionGraph extension_graph(const LanguageCache& lang, WordView w) {
  if (w.size() + 2 > lang.max_length()) throw Error("language not cached to length " + std::to_string(w.size() + 2));
  if (!w.empty() && !lang.contains(w)) throw Error("word not in language");
  ExtensionGraph g;
  g.center.assign(w.begin(), w.end());
  const std::size_t d = lang.alphabet().size();
  Word buf(w.size() + 2);
  std::copy(w.begin(), w.end(), buf.begin() + 1);
  for (Symbol a = 0; a < d; ++a) {
    buf[0] = a;
    if (lang.contains(WordView(buf).first(w.size() + 1))) g.left.push_back(a);
  }
  for (Symbol b = 0; b < d; ++b) {
    buf[w.size() + 1] = b;
    if (lang.contains(WordView(buf).subspan(1))) g.right.push_back(b);
  }
  for (Symbol a : g.left)
    for (Symbol b : g.right) {
      buf[0] = a;
      buf[w.size() + 1] = b;
      if (lang.contains(buf)) g.edges.emplace_back(a, b);
    }
  return g;
}

struct DendricVerdict {
  Word word;
  std::string verdict;
};

struct DendricReport {
  std::size_t max_length = 0;
  std::vector<DendricVerdict> words;
  bool all_trees = true;
  std::optional<DendricVerdict> first_failure;
};

inline DendricReport dendric_check(const LanguageCache& lang, std::size_t max_length) {
  if (max_length + 2 > lang.max_length()) throw Error("language not cached to length " + std::to_string(max_length + 2));
  DendricReport rep;
  rep.max_length = max_length;
  for (std::size_t n = 0; n <= max_length; ++n)
    for (const auto& w : lang.factors(n)) {
      ExtensionGraph g = extension_graph(lang, w);
      DendricVerdict v{w, g.verdict()};
      if (v.verdict != "tree" && rep.all_trees) {
        rep.all_trees = false;
        rep.first_failure = v;
      }
      rep.words.push_back(std::move(v));
    }
  return rep;
}

inline DendricReport dendric_check(const Substitution& s, std::size_t max_length) {
  return dendric_check(LanguageCache(s, max_length + 2), max_length);
}

// Edge values on a bipartite tree from vertex values: every vertex value is
// the sum of its incident edge values. Leaves are peeled one at a time.
struct BipartiteTree {
  std::size_t left = 0, right = 0;
  std::vector<std::pair<std::size_t, std::size_t>> edges;  // (left index, right index)
};

template <class Value>
std::vector<Value> tree_edge_solve(const BipartiteTree& g, const std::vector<Value>& left_values,
                                   const std::vector<Value>& right_values, const Value& zero = Value{}) {
  const std::size_t n = g.left + g.right;
  if (left_values.size() != g.left || right_values.size() != g.right) throw Error("one value per vertex required");
  if (g.edges.size() + 1 != n) throw Error("graph is not a tree");
  std::vector<std::vector<std::size_t>> incident(n);
  for (std::size_t e = 0; e < g.edges.size(); ++e) {
    incident[g.edges[e].first].push_back(e);
    incident[g.left + g.edges[e].second].push_back(e);
  }
  std::vector<Value> residual(left_values);
  residual.insert(residual.end(), right_values.begin(), right_values.end());
  std::vector<std::size_t> degree(n);
  for (std::size_t v = 0; v < n; ++v) degree[v] = incident[v].size();
  std::vector<bool> done(g.edges.size(), false);
  std::vector<Value> out(g.edges.size(), zero);
  std::vector<std::size_t> leaves;
  for (std::size_t v = 0; v < n; ++v)
    if (degree[v] == 1) leaves.push_back(v);
  std::size_t assigned = 0;
  while (!leaves.empty()) {
    std::size_t v = leaves.back();
    leaves.pop_back();
    if (degree[v] != 1) continue;
    std::size_t e = *std::find_if(incident[v].begin(), incident[v].end(), [&](std::size_t x) { return !done[x]; });
    std::size_t u = v < g.left ? g.left + g.edges[e].second : g.edges[e].first;
    out[e] = residual[v];
    residual[u] = residual[u] - residual[v];
    residual[v] = zero;
    done[e] = true;
    ++assigned;
    degree[v] = 0;
    if (--degree[u] == 1) leaves.push_back(u);
  }
  if (assigned != g.edges.size()) throw Error("graph is not a tree");
  for (const auto& r : residual)
    if (!(r == zero)) throw Error("inconsistent vertex totals");
  return out;
}

// Σ α·[x_{p+offset} = letter]. Kept in a canonical form modulo the identity
// Σ_a [x_{p+o} = a] = 1: the last letter only appears at offset 0.
class Decomposition {
 public:
  using Key = std::pair<long, Symbol>;  // (offset, letter)

  Decomposition() = default;
  explicit Decomposition(std::size_t alphabet_size) : d_(alphabet_size) {}

  static Decomposition letter(std::size_t alphabet_size, Symbol a, long offset = 0) {
    Decomposition r(alphabet_size);
    r.add(a, offset, 1);
    return r;
  }

  std::size_t alphabet_size() const { return d_; }
  const std::map<Key, std::int64_t>& terms() const { return terms_; }

  void add(Symbol a, long offset, std::int64_t coeff) {
    if (coeff == 0) return;
    if (d_ && a == d_ - 1 && offset != 0) {
      for (Symbol b = 0; b < d_; ++b) bump({0, b}, coeff);
      for (Symbol b = 0; b + 1 < d_; ++b) bump({offset, b}, -coeff);
      return;
    }
    bump({offset, a}, coeff);
  }

  Decomposition shifted(long by) const {
    Decomposition r(d_);
    for (const auto& [k, c] : terms_) r.add(k.second, k.first + by, c);
    return r;
  }

  friend Decomposition operator+(const Decomposition& x, const Decomposition& y) {
    Decomposition r(std::max(x.d_, y.d_));
    for (const auto& [k, c] : x.terms_) r.add(k.second, k.first, c);
    for (const auto& [k, c] : y.terms_) r.add(k.second, k.first, c);
    return r;
  }
  friend Decomposition operator-(const Decomposition& x, const Decomposition& y) {
    Decomposition r(std::max(x.d_, y.d_));
    for (const auto& [k, c] : x.terms_) r.add(k.second, k.first, c);
    for (const auto& [k, c] : y.terms_) r.add(k.second, k.first, -c);
    return r;
  }
  friend bool operator==(const Decomposition& x, const Decomposition& y) { return x.terms_ == y.terms_; }

  long min_offset() const { return terms_.empty() ? 0 : terms_.begin()->first.first; }
  long max_offset() const { return terms_.empty() ? 0 : terms_.rbegin()->first.first; }

  std::int64_t evaluate(WordView text, std::size_t p) const {
    std::int64_t s = 0;
    for (const auto& [k, c] : terms_) {
      long i = static_cast<long>(p) + k.first;
      if (i < 0 || i >= static_cast<long>(text.size())) throw Error("evaluation window leaves the text");
      if (text[static_cast<std::size_t>(i)] == k.second) s += c;
    }
    return s;
  }

  // max_a Σ_o |α(a, o)|
  std::int64_t weight() const {
    std::vector<std::int64_t> per(d_, 0);
    for (const auto& [k, c] : terms_) per[k.second] += c < 0 ? -c : c;
    return per.empty() ? 0 : *std::max_element(per.begin(), per.end());
  }

 private:
  void bump(const Key& k, std::int64_t c) {
    auto& slot = terms_[k];
    slot += c;
    if (slot == 0) terms_.erase(k);
  }

  std::size_t d_ = 0;
  std::map<Key, std::int64_t> terms_;
};

class DecompositionBuilder {
 public:
  explicit DecompositionBuilder(const LanguageCache& lang) : lang_(lang) {}

  const Decomposition& operator()(WordView v) {
    Word key(v.begin(), v.end());
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    Decomposition r = build(v);
    return memo_.emplace(std::move(key), std::move(r)).first->second;
  }

 private:
  Decomposition build(WordView v) {
    const std::size_t d = lang_.alphabet().size();
    if (v.empty()) throw Error("empty pattern");
    if (v.size() > lang_.max_length() || !lang_.contains(v)) throw Error("pattern not in language");
    if (v.size() == 1) return Decomposition::letter(d, v[0]);
    const std::size_t n = v.size() - 1;
    WordView tail = v.subspan(1), head = v.first(n), mid = v.subspan(1, n - 1);
    ExtensionGraph gt = extension_graph_n(tail), gh = extension_graph_n(head);
    if (gt.left.size() == 1) return (*this)(tail).shifted(1);
    if (gh.right.size() == 1) return (*this)(head);
    ExtensionGraph g = extension_graph_n(mid);
    if (!g.is_tree()) throw Error("extension graph is not a tree: " + g.describe(lang_.alphabet()));
    if (g.left.size() < 2 || g.right.size() < 2) throw Error("extension tree with a single vertex side: " + g.describe(lang_.alphabet()));
    std::vector<Decomposition> lv, rv;
    Word buf(mid.size() + 1);
    for (Symbol a : g.left) {
      buf[0] = a;
      std::copy(mid.begin(), mid.end(), buf.begin() + 1);
      lv.push_back((*this)(buf));
    }
    for (Symbol b : g.right) {
      std::copy(mid.begin(), mid.end(), buf.begin());
      buf[mid.size()] = b;
      rv.push_back((*this)(buf).shifted(1));
    }
    BipartiteTree t{g.left.size(), g.right.size(), {}};
    std::size_t want = 0;
    for (const auto& [a, b] : g.edges) {
      std::size_t i = std::find(g.left.begin(), g.left.end(), a) - g.left.begin();
      std::size_t j = std::find(g.right.begin(), g.right.end(), b) - g.right.begin();
      if (a == v.front() && b == v.back()) want = t.edges.size();
      t.edges.emplace_back(i, j);
    }
    auto values = tree_edge_solve(t, lv, rv, Decomposition(d));
    return values[want];
  }

  // Extension graph for words whose extensions may exceed the cache by one.
  ExtensionGraph extension_graph_n(WordView w) { return extension_graph(lang_, w); }

  const LanguageCache& lang_;
  std::map<Word, Decomposition> memo_;
};

inline Decomposition cylinder_decomposition(const LanguageCache& lang, WordView v) {
  DecompositionBuilder b(lang);
  return b(v);
}

// Directive sequences for Arnoux–Rauzy words over letters 1..d.
struct DirectiveSequence {
  std::size_t d = 0;
  std::vector<unsigned> prefix;
  std::vector<unsigned> period;

  unsigned at(std::size_t n) const {
    if (n < prefix.size()) return prefix[n];
    return period[(n - prefix.size()) % period.size()];
  }

  bool recurrent() const {
    for (unsigned i = 1; i <= d; ++i)
      if (std::find(period.begin(), period.end(), i) == period.end()) return false;
    return true;
  }

  Alphabet alphabet() const {
    std::vector<std::string> names;
    for (std::size_t i = 1; i <= d; ++i) names.push_back(std::to_string(i));
    return Alphabet(names);
  }

  std::string to_string() const {
    auto join = [](const std::vector<unsigned>& xs) {
      std::string s;
      for (std::size_t i = 0; i < xs.size(); ++i) s += (i ? "," : "") + std::to_string(xs[i]);
      return s;
    };
    std::string s = "d=" + std::to_string(d);
    if (!prefix.empty()) s += "; prefix=" + join(prefix);
    return s + "; period=" + join(period);
  }

  // `d=3; prefix=1,2; period=1,2,3` (prefix optional, fields in any order).
  static DirectiveSequence parse(std::string_view text) {
    DirectiveSequence ds;
    bool has_d = false, has_period = false;
    std::string src(text);
    std::stringstream fields(src);
    std::string field;
    auto trim = [](std::string s) {
      auto b = s.find_first_not_of(" \t\r\n");
      auto e = s.find_last_not_of(" \t\r\n");
      return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    auto numbers = [&](const std::string& list) {
      std::vector<unsigned> out;
      std::stringstream items(list);
      std::string item;
      while (std::getline(items, item, ',')) {
        item = trim(item);
        if (item.empty() || item.find_first_not_of("0123456789") != std::string::npos)
          throw Error("directive: bad index '" + item + "'");
        out.push_back(static_cast<unsigned>(std::stoul(item)));
      }
      return out;
    };
    while (std::getline(fields, field, ';')) {
      field = trim(field);
      if (field.empty()) continue;
      auto eq = field.find('=');
      if (eq == std::string::npos) throw Error("directive: expected key=value in '" + field + "'");
      std::string key = trim(field.substr(0, eq)), value = trim(field.substr(eq + 1));
      if (key == "d") {
        auto v = numbers(value);
        if (v.size() != 1) throw Error("directive: d takes one value");
        ds.d = v[0];
        has_d = true;
      } else if (key == "prefix") {
        ds.prefix = numbers(value);
      } else if (key == "period") {
        ds.period = numbers(value);
        has_period = true;
      } else {
        throw Error("directive: unknown key '" + key + "'");
      }
    }
    if (!has_d || ds.d < 2) throw Error("directive: d >= 2 required");
    if (!has_period || ds.period.empty()) throw Error("directive: non-empty period required");
    for (const auto* xs : {&ds.prefix, &ds.period})
      for (unsigned i : *xs)
        if (i < 1 || i > ds.d) throw Error("directive: index " + std::to_string(i) + " outside 1.." + std::to_string(ds.d));
    return ds;
  }
};

// σ_i: i -> i, j -> j i
inline Substitution ar_substitution(std::size_t d, unsigned i) {
  std::vector<std::string> names;
  for (std::size_t k = 1; k <= d; ++k) names.push_back(std::to_string(k));
  std::vector<Word> images;
  for (Symbol j = 0; j < d; ++j)
    images.push_back(j + 1 == i ? Word{j} : Word{j, static_cast<Symbol>(i - 1)});
  return Substitution(Alphabet(names), std::move(images));
}

// Prefix of lim σ_{i_0} ... σ_{i_n}(1), of length exactly min_length.
inline Word ar_generate(const DirectiveSequence& dir, std::size_t min_length) {
  if (!dir.recurrent()) throw Error("directive not recurrent");
  const std::size_t d = dir.d;
  std::size_t depth = 0;
  for (;; ++depth) {
    std::vector<std::uint64_t> x(d, 0);
    x[0] = 1;
    for (std::size_t k = depth + 1; k-- > 0;) {
      const unsigned i = dir.at(k) - 1;
      std::uint64_t total = 0;
      for (std::size_t j = 0; j < d; ++j)
        if (j != i) total += x[j];
      x[i] += total;
    }
    std::uint64_t len = std::accumulate(x.begin(), x.end(), std::uint64_t{0});
    if (len >= min_length) break;
    if (depth > 100000) throw Error("directive word does not grow");
  }
  std::vector<Substitution> subs;
  for (unsigned i = 1; i <= d; ++i) subs.push_back(ar_substitution(d, i));
  Word w{0};
  for (std::size_t k = depth + 1; k-- > 0;) w = subs[dir.at(k) - 1].apply(w);
  w.resize(min_length);
  return w;
}

// Longest run of equal consecutive indices over prefix + two periods; none
// when the period is constant (runs are then unbounded).
inline std::optional<std::size_t> ar_run_bound(const DirectiveSequence& dir) {
  if (dir.d != 3) throw Error("bound proved for three letters only");
  if (std::all_of(dir.period.begin(), dir.period.end(), [&](unsigned i) { return i == dir.period.front(); }))
    return std::nullopt;
  std::vector<unsigned> seq = dir.prefix;
  for (int r = 0; r < 2; ++r) seq.insert(seq.end(), dir.period.begin(), dir.period.end());
  std::size_t best = 1, run = 1;
  for (std::size_t i = 1; i < seq.size(); ++i) {
    run = seq[i] == seq[i - 1] ? run + 1 : 1;
    best = std::max(best, run);
  }
  return best;
}

struct ProbeEntry {
  Word pattern;
  std::int64_t observed = 0;  // max_n B_v(n) on the scanned text
  bool bounded = false;       // apparently bounded (monitor)
  std::int64_t weight = 0;    // K = max_a Σ|α(a, o)| of the decomposition
  std::int64_t bound = 0;     // |A|·K·C
};

struct ProbeReport {
  bool dendric_screen = false;
  std::size_t screen_length = 0;
  std::int64_t letter_bound = 0;  // C, observed
  bool letters_bounded = false;
  std::vector<ProbeEntry> letters, factors;
  bool verdicts_agree = false;
  bool bound_dominates = false;
};

// Scans letters and every factor of length 2..max_len of the text; refuses
// sources whose extension graphs up to max_len are not all trees.
inline ProbeReport letters_vs_factors_probe(const Alphabet& alphabet, WordView text, const LanguageCache& lang,
                                            std::size_t max_len, std::size_t horizon) {
  ProbeReport rep;
  rep.screen_length = max_len;
  DendricReport dr = dendric_check(lang, max_len);
  rep.dendric_screen = dr.all_trees;
  if (!dr.all_trees) {
    std::string w = alphabet.format(dr.first_failure->word);
    throw Error("dendric screen failed at '" + (w.empty() ? std::string("ε") : w) + "' (" + dr.first_failure->verdict + ")");
  }
  const std::size_t d = alphabet.size();
  rep.letters_bounded = true;
  for (Symbol a = 0; a < d; ++a) {
    BalanceProfile bp = balance_profile(text, Word{a}, horizon);
    ProbeEntry e{Word{a}, bp.max(), bp.apparently_bounded(), 1, 0};
    rep.letter_bound = std::max(rep.letter_bound, e.observed);
    rep.letters_bounded = rep.letters_bounded && e.bounded;
    rep.letters.push_back(e);
  }
  for (auto& e : rep.letters) e.bound = static_cast<std::int64_t>(d) * rep.letter_bound;
  DecompositionBuilder builder(lang);
  bool factors_bounded = true;
  rep.bound_dominates = true;
  for (std::size_t n = 2; n <= max_len; ++n)
    for (const auto& v : lang.factors(n)) {
      BalanceProfile bp = balance_profile(text, v, horizon);
      ProbeEntry e;
      e.pattern = v;
      e.observed = bp.max();
      e.bounded = bp.apparently_bounded();
      e.weight = builder(v).weight();
      e.bound = static_cast<std::int64_t>(d) * e.weight * rep.letter_bound;
      factors_bounded = factors_bounded && e.bounded;
      rep.bound_dominates = rep.bound_dominates && e.observed <= e.bound;
      rep.factors.push_back(e);
    }
  rep.verdicts_agree = rep.letters_bounded == factors_bounded;
  return rep;
}

inline ProbeReport letters_vs_factors_probe(const Substitution& s, std::size_t max_len, std::size_t horizon,
                                            std::size_t length) {
  LanguageCache lang(s, max_len + 2);
  Word text = generate_text(s, length);
  return letters_vs_factors_probe(s.alphabet(), text, lang, max_len, horizon);
}

inline ProbeReport letters_vs_factors_probe(const DirectiveSequence& dir, std::size_t max_len, std::size_t horizon,
                                            std::size_t length) {
  Word text = ar_generate(dir, length);
  LanguageCache lang = LanguageCache::from_text(dir.alphabet(), text, max_len + 2);
  return letters_vs_factors_probe(dir.alphabet(), text, lang, max_len, horizon);
}

}  // namespace balans

#pragma once

// Substitutions (non-erasing free-monoid morphisms) and the combinatorial
// machinery built on them: primitivity, languages of the generated subshift,
// k-block recodings, fixed-point prefixes and return words.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "balans/words.hpp"

namespace balans {

class Substitution {
 public:
  Substitution() = default;

  Substitution(Alphabet alphabet, std::vector<Word> images)
      : alphabet_(std::move(alphabet)), images_(std::move(images)) {
    if (images_.size() != alphabet_.size()) throw Error("one image per letter required");
    for (std::size_t a = 0; a < images_.size(); ++a) {
      if (images_[a].empty()) throw Error("erasing image for letter '" + alphabet_.name(a) + "'");
      for (Symbol s : images_[a])
        if (s >= alphabet_.size()) throw Error("foreign symbol in image of '" + alphabet_.name(a) + "'");
    }
  }

  // `0->01;1->10`, bracketed multi-character names (`[ab]->[ab,c]`), or a JSON
  // object {"alphabet": [...], "images": {...}}.
  static Substitution parse(std::string_view spec);

  const Alphabet& alphabet() const { return alphabet_; }
  std::size_t size() const { return alphabet_.size(); }
  const Word& image(Symbol a) const { return images_.at(a); }
  const std::vector<Word>& images() const { return images_; }

  Word apply(WordView w) const {
    Word out;
    std::size_t len = 0;
    for (Symbol s : w) {
      if (s >= size()) throw Error("foreign symbol");
      len += images_[s].size();
    }
    out.reserve(len);
    for (Symbol s : w) out.insert(out.end(), images_[s].begin(), images_[s].end());
    return out;
  }

  Word apply_power(WordView w, unsigned m) const {
    Word cur(w.begin(), w.end());
    for (unsigned i = 0; i < m; ++i) cur = apply(cur);
    return cur;
  }

  std::size_t max_image_length() const {
    std::size_t m = 0;
    for (const auto& w : images_) m = std::max(m, w.size());
    return m;
  }

  std::optional<std::size_t> constant_length() const {
    for (const auto& w : images_)
      if (w.size() != images_.front().size()) return std::nullopt;
    return images_.front().size();
  }

  std::string to_string() const {
    std::string out;
    const bool plain = alphabet_.single_char();
    for (std::size_t a = 0; a < size(); ++a) {
      if (a) out += ';';
      out += plain ? alphabet_.name(a) : "[" + alphabet_.name(a) + "]";
      out += "->";
      out += alphabet_.format(images_[a]);
    }
    return out;
  }

  std::string format(WordView w) const { return alphabet_.format(w); }
  Word word(std::string_view text) const { return alphabet_.parse(text); }

  friend bool operator==(const Substitution& a, const Substitution& b) {
    return a.alphabet_ == b.alphabet_ && a.images_ == b.images_;
  }

 private:
  Alphabet alphabet_;
  std::vector<Word> images_;
};

namespace detail {

class SpecParser {
 public:
  explicit SpecParser(std::string_view text) : text_(text) {}

  Substitution run() {
    struct Clause {
      std::string lhs;
      std::vector<std::pair<std::string, std::size_t>> rhs;  // name, offset
    };
    std::vector<Clause> clauses;
    skip_space();
    while (pos_ < text_.size()) {
      Clause c;
      std::size_t lhs_at = pos_;
      auto lhs = read_symbols(true);
      if (lhs.size() != 1) fail(lhs_at, "expected exactly one letter before '->'");
      c.lhs = lhs.front().first;
      skip_space();
      if (text_.substr(pos_, 2) != "->") fail(pos_, "expected '->'");
      pos_ += 2;
      skip_space();
      c.rhs = read_symbols(false);
      if (c.rhs.empty()) fail(pos_, "empty image for '" + c.lhs + "'");
      clauses.push_back(std::move(c));
      skip_space();
      if (pos_ < text_.size()) {
        if (text_[pos_] != ';') fail(pos_, "expected ';'");
        ++pos_;
        skip_space();
      }
    }
    if (clauses.empty()) fail(0, "no clauses");
    std::vector<std::string> names;
    for (const auto& c : clauses) {
      if (std::find(names.begin(), names.end(), c.lhs) != names.end()) fail(0, "letter '" + c.lhs + "' defined twice");
      names.push_back(c.lhs);
    }
    Alphabet alphabet(names);
    std::vector<Word> images;
    for (const auto& c : clauses) {
      Word w;
      for (const auto& [name, at] : c.rhs) {
        if (!alphabet.contains(name)) fail(at, "foreign symbol '" + name + "'");
        w.push_back(alphabet.index(name));
      }
      images.push_back(std::move(w));
    }
    return Substitution(std::move(alphabet), std::move(images));
  }

 private:
  static bool is_space(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r'; }

  void skip_space() {
    while (pos_ < text_.size() && is_space(text_[pos_])) ++pos_;
  }

  // Reads letters up to '->' (lhs) or ';' / end (rhs).
  std::vector<std::pair<std::string, std::size_t>> read_symbols(bool lhs) {
    std::vector<std::pair<std::string, std::size_t>> out;
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (is_space(c)) {
        ++pos_;
        continue;
      }
      if (c == ';') break;
      if (text_.substr(pos_, 2) == "->") {
        if (lhs) break;
        fail(pos_, "unexpected '->'");
      }
      if (c == ']') fail(pos_, "unmatched ']'");
      if (c == '[') {
        auto close = text_.find(']', pos_);
        if (close == std::string_view::npos) fail(pos_, "unterminated '['");
        std::size_t start = pos_ + 1;
        while (start <= close) {
          std::size_t comma = std::min(text_.find(',', start), close);
          std::string tok(text_.substr(start, comma - start));
          auto b = tok.find_first_not_of(" \t");
          auto e = tok.find_last_not_of(" \t");
          if (b == std::string::npos) fail(start, "empty name inside brackets");
          out.emplace_back(tok.substr(b, e - b + 1), start + b);
          start = comma + 1;
        }
        pos_ = close + 1;
        continue;
      }
      out.emplace_back(std::string(1, c), pos_);
      ++pos_;
    }
    return out;
  }

  [[noreturn]] void fail(std::size_t at, const std::string& what) const {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i < at && i < text_.size(); ++i) {
      if (text_[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw Error("parse error at line " + std::to_string(line) + ", column " + std::to_string(col) + ": " + what);
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

inline Substitution parse_json_spec(std::string_view text) {
  nlohmann::ordered_json j;
  try {
    j = nlohmann::ordered_json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(std::string("parse error: ") + e.what());
  }
  if (!j.is_object() || !j.contains("images") || !j["images"].is_object())
    throw Error("parse error: JSON substitution needs an \"images\" object");
  std::vector<std::string> names;
  if (j.contains("alphabet")) {
    for (const auto& n : j["alphabet"]) names.push_back(n.get<std::string>());
  } else {
    for (const auto& [k, _] : j["images"].items()) names.push_back(k);
  }
  Alphabet alphabet(names);
  std::vector<Word> images(alphabet.size());
  std::vector<bool> seen(alphabet.size(), false);
  for (const auto& [k, v] : j["images"].items()) {
    Symbol a = alphabet.index(k);
    if (v.is_string()) {
      images[a] = alphabet.parse(v.get<std::string>());
    } else if (v.is_array()) {
      for (const auto& n : v) images[a].push_back(alphabet.index(n.get<std::string>()));
    } else {
      throw Error("parse error: image of '" + k + "' must be a string or an array");
    }
    seen[a] = true;
  }
  for (std::size_t a = 0; a < seen.size(); ++a)
    if (!seen[a]) throw Error("parse error: missing image for '" + alphabet.name(a) + "'");
  return Substitution(std::move(alphabet), std::move(images));
}

}  // namespace detail

inline Substitution Substitution::parse(std::string_view spec) {
  auto first = spec.find_first_not_of(" \t\r\n");
  if (first != std::string_view::npos && spec[first] == '{') return detail::parse_json_spec(spec);
  return detail::SpecParser(spec).run();
}

struct Primitivity {
  bool primitive = false;
  unsigned exponent = 0;  // smallest k with M^k > 0 when primitive
};

// Boolean powers of the incidence pattern, capped by Wielandt's bound (d-1)^2+1.
inline Primitivity is_primitive(const Substitution& s) {
  const std::size_t d = s.size();
  std::vector<std::uint8_t> base(d * d, 0);
  for (std::size_t b = 0; b < d; ++b)
    for (Symbol a : s.image(b)) base[a * d + b] = 1;
  auto positive = [](const std::vector<std::uint8_t>& m) {
    return std::all_of(m.begin(), m.end(), [](std::uint8_t x) { return x != 0; });
  };
  std::vector<std::uint8_t> cur = base;
  const unsigned bound = static_cast<unsigned>((d - 1) * (d - 1) + 1);
  for (unsigned k = 1; k <= bound; ++k) {
    if (positive(cur)) return {true, k};
    std::vector<std::uint8_t> next(d * d, 0);
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = 0; j < d; ++j) {
        if (!cur[i * d + j]) continue;
        for (std::size_t c = 0; c < d; ++c)
          if (base[j * d + c]) next[i * d + c] = 1;
      }
    cur = std::move(next);
  }
  return {false, 0};
}

inline void require_primitive(const Substitution& s, const char* what = "language requires primitivity") {
  if (!is_primitive(s).primitive) throw Error(what);
}

// |σ^m(a)| for every letter, saturating at max().
inline std::vector<std::uint64_t> image_lengths(const Substitution& s, unsigned m) {
  std::vector<std::uint64_t> len(s.size(), 1);
  constexpr auto cap = std::numeric_limits<std::uint64_t>::max() / 4;
  for (unsigned i = 0; i < m; ++i) {
    std::vector<std::uint64_t> next(s.size(), 0);
    for (std::size_t a = 0; a < s.size(); ++a) {
      std::uint64_t t = 0;
      for (Symbol b : s.image(a)) t = std::min(cap, t + len[b]);
      next[a] = t;
    }
    len = std::move(next);
  }
  return len;
}

// Smallest m with min_a |σ^m(a)| >= n.
inline unsigned level_for_length(const Substitution& s, std::size_t n, unsigned min_level = 0) {
  for (unsigned m = min_level;; ++m) {
    auto len = image_lengths(s, m);
    if (*std::min_element(len.begin(), len.end()) >= n) return m;
    if (m > 64 * s.size() + 64) throw Error("images do not grow");
  }
}

// L_2 as the closure of the pairs inside letter images under "ab in L_2 implies
// every pair of σ(ab) is in L_2".
inline FactorSet two_letter_language(const Substitution& s) {
  FactorSet out{2, {}};
  std::vector<Word> todo;
  auto add_pairs = [&](WordView w) {
    for (std::size_t i = 0; i + 1 < w.size(); ++i) {
      Word p{w[i], w[i + 1]};
      if (out.members.insert(p).second) todo.push_back(std::move(p));
    }
  };
  for (const auto& img : s.images()) add_pairs(img);
  while (!todo.empty()) {
    Word p = std::move(todo.back());
    todo.pop_back();
    add_pairs(s.apply(p));
  }
  return out;
}

// L_1..L_max of the subshift generated by a primitive substitution, or of a
// finite text (used for S-adic words, where it is a finite-length screen).
class LanguageCache {
 public:
  LanguageCache(const Substitution& s, std::size_t max_length) : alphabet_(s.alphabet()) {
    require_primitive(s);
    if (max_length == 0) throw Error("language length must be positive");
    by_length_.resize(max_length + 1);
    by_length_[0] = FactorSet{0, {Word{}}};
    FactorSet l2 = two_letter_language(s);
    const unsigned m = level_for_length(s, max_length);
    for (std::size_t n = 1; n <= max_length; ++n) by_length_[n].length = n;
    for (const auto& ab : l2) {
      Word w = s.apply_power(ab, m);
      for (std::size_t n = 1; n <= max_length; ++n)
        for (std::size_t i = 0; i + n <= w.size(); ++i) by_length_[n].members.emplace(w.begin() + i, w.begin() + i + n);
    }
    levels_ = m;
  }

  static LanguageCache from_text(const Alphabet& alphabet, WordView text, std::size_t max_length) {
    if (max_length == 0 || max_length > text.size()) throw Error("window exceeds word");
    LanguageCache c;
    c.alphabet_ = alphabet;
    c.by_length_.resize(max_length + 1);
    c.by_length_[0] = FactorSet{0, {Word{}}};
    for (std::size_t n = 1; n <= max_length; ++n) c.by_length_[n] = factors_of(text, n);
    return c;
  }

  const Alphabet& alphabet() const { return alphabet_; }
  std::size_t max_length() const { return by_length_.size() - 1; }
  unsigned iteration_depth() const { return levels_; }

  const FactorSet& factors(std::size_t n) const {
    if (n > max_length()) throw Error("language not cached to length " + std::to_string(n));
    return by_length_[n];
  }

  bool contains(WordView w) const { return factors(w.size()).contains(w); }

 private:
  LanguageCache() = default;
  Alphabet alphabet_;
  std::vector<FactorSet> by_length_;
  unsigned levels_ = 0;
};

inline FactorSet language(const Substitution& s, std::size_t n) {
  if (n == 0) throw Error("factor length must be positive");
  require_primitive(s);
  if (n == 2) return two_letter_language(s);
  return LanguageCache(s, n).factors(n);
}

// Letters of the block alphabet are in bijection with L_k(X_σ).
struct BlockCoding {
  std::size_t order = 0;
  Alphabet block_alphabet;
  std::vector<Word> decode;
  std::map<Word, Symbol> encode_map;

  Symbol encode(WordView block) const {
    auto it = encode_map.find(Word(block.begin(), block.end()));
    if (it == encode_map.end()) throw Error("block not in language");
    return it->second;
  }

  // Overlapping length-k windows of a text, one block letter per start position.
  Word code_text(WordView text) const {
    if (text.size() < order) return {};
    Word out;
    out.reserve(text.size() - order + 1);
    for (std::size_t i = 0; i + order <= text.size(); ++i) out.push_back(encode(text.subspan(i, order)));
    return out;
  }
};

struct BlockSubstitution {
  Substitution substitution;
  BlockCoding coding;
};

inline BlockSubstitution k_block_substitution(const Substitution& s, std::size_t k) {
  if (k < 2) throw Error("block order must be at least 2");
  FactorSet lk = language(s, k);
  BlockCoding coding;
  coding.order = k;
  std::vector<std::string> names;
  const bool plain = s.alphabet().single_char();
  for (const auto& w : lk) {
    coding.encode_map.emplace(w, static_cast<Symbol>(coding.decode.size()));
    coding.decode.push_back(w);
    std::string name;
    for (std::size_t i = 0; i < w.size(); ++i) {
      if (!plain && i) name += '.';
      name += s.alphabet().name(w[i]);
    }
    names.push_back(std::move(name));
  }
  coding.block_alphabet = Alphabet(names);
  std::vector<Word> images;
  for (const auto& w : coding.decode) {
    Word img = s.apply(w);
    const std::size_t count = s.image(w.front()).size();
    Word blocks;
    for (std::size_t j = 0; j < count; ++j) blocks.push_back(coding.encode(WordView(img).subspan(j, k)));
    images.push_back(std::move(blocks));
  }
  Substitution sk(coding.block_alphabet, std::move(images));
  require_primitive(sk, "block substitution is not primitive");
  return {std::move(sk), std::move(coding)};
}

inline BlockSubstitution two_block_substitution(const Substitution& s) { return k_block_substitution(s, 2); }

// Prefix (length >= min_length) of the one-sided fixed point of σ^p starting
// with letter a, where p is the period of a under "first letter of the image".
inline Word generate_prefix(const Substitution& s, Symbol a, std::size_t min_length) {
  if (a >= s.size()) throw Error("foreign symbol");
  require_primitive(s, "substitution is not primitive");
  unsigned p = 0;
  Symbol x = a;
  for (unsigned i = 1; i <= s.size(); ++i) {
    x = s.image(x).front();
    if (x == a) {
      p = i;
      break;
    }
  }
  if (p == 0) throw Error("no right-prolongable letter");
  Word w{a};
  while (w.size() < min_length) w = s.apply_power(w, p);
  return w;
}

// A length-`length` word of the language: a fixed-point prefix when some letter
// is prolongable, otherwise a segment σ^m(a).
inline Word generate_text(const Substitution& s, std::size_t length) {
  require_primitive(s, "substitution is not primitive");
  for (Symbol a = 0; a < s.size(); ++a) {
    try {
      Word w = generate_prefix(s, a, length);
      w.resize(length);
      return w;
    } catch (const Error&) {
    }
  }
  Word w{0};
  while (w.size() < length) w = s.apply(w);
  w.resize(length);
  return w;
}

struct ReturnWordSet {
  Word base;
  std::vector<Word> words;  // sorted by length, then lexicographically
};

inline void sort_shortlex(std::vector<Word>& ws) {
  std::sort(ws.begin(), ws.end(), [](const Word& x, const Word& y) {
    return x.size() != y.size() ? x.size() < y.size() : x < y;
  });
}

// First return words to a single letter, collected from σ^m(ab), ab in L_2,
// until the collected set is unchanged over two successive iterates.
inline ReturnWordSet return_words(const Substitution& s, Symbol a, std::size_t cap = 1u << 24) {
  require_primitive(s);
  FactorSet l2 = two_letter_language(s);
  std::set<Word> found;
  std::vector<Word> segments(l2.begin(), l2.end());
  std::size_t stable = 0;
  for (unsigned m = 1;; ++m) {
    std::size_t scanned = 0;
    const std::size_t before = found.size();
    for (auto& seg : segments) {
      seg = s.apply(seg);
      scanned += seg.size();
      std::size_t last = seg.size();
      for (std::size_t i = 0; i < seg.size(); ++i) {
        if (seg[i] != a) continue;
        if (last != seg.size()) found.emplace(seg.begin() + last, seg.begin() + i);
        last = i;
      }
    }
    if (scanned > cap) throw Error("return-word scan did not stabilize");
    auto lens = image_lengths(s, m);
    const auto longest = *std::max_element(lens.begin(), lens.end());
    stable = (found.size() == before && !found.empty()) ? stable + 1 : 0;
    if (stable >= 1 && scanned >= 4 * longest) break;
  }
  ReturnWordSet out{Word{a}, std::vector<Word>(found.begin(), found.end())};
  sort_shortlex(out.words);
  return out;
}

struct FixedPointSeed {
  Symbol left;
  Symbol right;
  unsigned power;
};

// Pairs b·a in L_2 with σ^p(b) ending in b and σ^p(a) starting with a.
inline std::vector<FixedPointSeed> bi_infinite_seeds(const Substitution& s) {
  FactorSet l2 = two_letter_language(s);
  std::vector<FixedPointSeed> out;
  for (const auto& ba : l2) {
    Symbol fb = ba[0], fa = ba[1];
    for (unsigned p = 1; p <= s.size(); ++p) {
      fb = s.image(fb).back();
      fa = s.image(fa).front();
      if (fb == ba[0] && fa == ba[1]) {
        out.push_back({ba[0], ba[1], p});
        break;
      }
    }
  }
  return out;
}

}  // namespace balans

#pragma once

// Finite words over small indexed alphabets: occurrence counting, factor
// enumeration and abelianisation. Everything downstream stores symbols as
// integers; names only appear when parsing or printing.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace balans {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using Symbol = std::uint32_t;
using Word = std::vector<Symbol>;
using WordView = std::span<const Symbol>;

class Alphabet {
 public:
  Alphabet() = default;

  explicit Alphabet(std::vector<std::string> names) : names_(std::move(names)) {
    if (names_.size() < 2) throw Error("alphabet needs at least two letters");
    for (std::size_t i = 0; i < names_.size(); ++i) {
      if (names_[i].empty()) throw Error("empty letter name");
      if (!index_.emplace(names_[i], static_cast<Symbol>(i)).second)
        throw Error("duplicate letter '" + names_[i] + "'");
    }
  }

  std::size_t size() const { return names_.size(); }
  const std::string& name(Symbol s) const { return names_.at(s); }
  const std::vector<std::string>& names() const { return names_; }

  bool contains(std::string_view name) const { return index_.count(std::string(name)) != 0; }

  Symbol index(std::string_view name) const {
    auto it = index_.find(std::string(name));
    if (it == index_.end()) throw Error("foreign symbol '" + std::string(name) + "'");
    return it->second;
  }

  bool single_char() const {
    return std::all_of(names_.begin(), names_.end(), [](const std::string& n) { return n.size() == 1; });
  }

  // Plain concatenation when every name is one character, `[a,b,c]` otherwise.
  std::string format(WordView w) const {
    std::string out;
    if (single_char()) {
      for (Symbol s : w) out += name(s);
      return out;
    }
    out = "[";
    for (std::size_t i = 0; i < w.size(); ++i) {
      if (i) out += ',';
      out += name(w[i]);
    }
    return out + "]";
  }

  // Inverse of format(); also accepts mixed single characters and bracket groups.
  Word parse(std::string_view text) const {
    Word w;
    std::size_t i = 0;
    while (i < text.size()) {
      char c = text[i];
      if (c == ' ' || c == '\t') {
        ++i;
      } else if (c == '[') {
        auto close = text.find(']', i);
        if (close == std::string_view::npos) throw Error("unterminated '[' in word");
        std::string_view body = text.substr(i + 1, close - i - 1);
        std::size_t start = 0;
        while (start <= body.size()) {
          auto comma = body.find(',', start);
          if (comma == std::string_view::npos) comma = body.size();
          std::string_view tok = body.substr(start, comma - start);
          while (!tok.empty() && tok.front() == ' ') tok.remove_prefix(1);
          while (!tok.empty() && tok.back() == ' ') tok.remove_suffix(1);
          if (!tok.empty()) w.push_back(index(tok));
          start = comma + 1;
        }
        i = close + 1;
      } else {
        w.push_back(index(text.substr(i, 1)));
        ++i;
      }
    }
    return w;
  }

  friend bool operator==(const Alphabet& a, const Alphabet& b) { return a.names_ == b.names_; }

 private:
  std::vector<std::string> names_;
  std::unordered_map<std::string, Symbol> index_;
};

// All distinct factors of one fixed length.
struct FactorSet {
  std::size_t length = 0;
  std::set<Word> members;

  bool contains(WordView w) const {
    return w.size() == length && members.count(Word(w.begin(), w.end())) != 0;
  }
  std::size_t size() const { return members.size(); }
  auto begin() const { return members.begin(); }
  auto end() const { return members.end(); }

  friend bool operator==(const FactorSet&, const FactorSet&) = default;
};

struct AbelianVector {
  std::vector<std::int64_t> counts;

  std::int64_t total() const {
    std::int64_t t = 0;
    for (auto c : counts) t += c;
    return t;
  }
  friend AbelianVector operator+(AbelianVector a, const AbelianVector& b) {
    if (a.counts.size() != b.counts.size()) throw Error("abelian vectors over different alphabets");
    for (std::size_t i = 0; i < a.counts.size(); ++i) a.counts[i] += b.counts[i];
    return a;
  }
  friend bool operator==(const AbelianVector&, const AbelianVector&) = default;
};

namespace detail {

inline std::vector<std::size_t> prefix_function(WordView p) {
  std::vector<std::size_t> pi(p.size(), 0);
  for (std::size_t i = 1; i < p.size(); ++i) {
    std::size_t k = pi[i - 1];
    while (k > 0 && p[i] != p[k]) k = pi[k - 1];
    if (p[i] == p[k]) ++k;
    pi[i] = k;
  }
  return pi;
}

}  // namespace detail

// Calls visit(i) for every start position i of an occurrence of v in w
// (overlapping occurrences included), in increasing order.
template <class Visit>
void for_each_occurrence(WordView w, WordView v, Visit&& visit) {
  if (v.empty()) throw Error("empty pattern");
  if (v.size() > w.size()) return;
  const auto pi = detail::prefix_function(v);
  std::size_t k = 0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    while (k > 0 && (k == v.size() || w[i] != v[k])) k = pi[k - 1];
    if (w[i] == v[k]) ++k;
    if (k == v.size()) visit(i + 1 - v.size());
  }
}

inline std::size_t count_occurrences(WordView w, WordView v) {
  std::size_t n = 0;
  for_each_occurrence(w, v, [&](std::size_t) { ++n; });
  return n;
}

// 0/1 marks of occurrence starts, one per position of w.
inline std::vector<std::uint8_t> occurrence_marks(WordView w, WordView v) {
  std::vector<std::uint8_t> marks(w.size(), 0);
  for_each_occurrence(w, v, [&](std::size_t i) { marks[i] = 1; });
  return marks;
}

inline FactorSet factors_of(WordView w, std::size_t n) {
  if (n == 0) throw Error("factor length must be positive");
  if (n > w.size()) throw Error("window exceeds word");
  FactorSet fs{n, {}};
  for (std::size_t i = 0; i + n <= w.size(); ++i) fs.members.emplace(w.begin() + i, w.begin() + i + n);
  return fs;
}

inline AbelianVector abelianize(WordView w, std::size_t alphabet_size) {
  AbelianVector v{std::vector<std::int64_t>(alphabet_size, 0)};
  for (Symbol s : w) {
    if (s >= alphabet_size) throw Error("symbol outside alphabet");
    ++v.counts[s];
  }
  return v;
}

inline bool is_prefix(WordView prefix, WordView w) {
  return prefix.size() <= w.size() && std::equal(prefix.begin(), prefix.end(), w.begin());
}

}  // namespace balans

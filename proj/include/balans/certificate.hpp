#pragma once

// Imbalance certificates: divisibility of |σ^n(w)| by the frequency
// denominator, potential (coboundary) inconsistency of qφ on the 2-block
// graph, and spectral necessary conditions. Every certificate carries enough
// data for verify_certificate to recheck it from the substitution alone.

#include <complex>
#include <cstdint>
#include <deque>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "balans/frequency.hpp"
#include "balans/linalg.hpp"
#include "balans/parallel.hpp"
#include "balans/substitution.hpp"

namespace balans {

enum class CertificateKind { DivisibilityReturnWord, DivisibilityBACBC, PotentialInconsistency, SpectralNecessary };

inline const char* to_string(CertificateKind k) {
  switch (k) {
    case CertificateKind::DivisibilityReturnWord:
      return "DivisibilityReturnWord";
    case CertificateKind::DivisibilityBACBC:
      return "DivisibilityBACBC";
    case CertificateKind::PotentialInconsistency:
      return "PotentialInconsistency";
    case CertificateKind::SpectralNecessary:
      return "SpectralNecessary";
  }
  return "?";
}

inline CertificateKind certificate_kind(const std::string& s) {
  for (auto k : {CertificateKind::DivisibilityReturnWord, CertificateKind::DivisibilityBACBC,
                 CertificateKind::PotentialInconsistency, CertificateKind::SpectralNecessary})
    if (s == to_string(k)) return k;
  throw Error("unknown certificate kind '" + s + "'");
}

struct ModularData {
  std::uint64_t modulus = 0;
  std::size_t rho = 0, pi = 0;
  std::size_t start = 0;                 // first level listed in residues
  std::vector<std::uint64_t> residues;   // |σ^n(w)| mod q for n = start .. start+pi-1
  unsigned witness_level = 0;            // first level >= threshold with nonzero residue
  BigInt witness_length;                 // |σ^witness_level(w)|, exact
};

struct CycleData {
  std::vector<Word> blocks;  // directed cycle in the 2-block graph
  BigInt qphi_sum;
};

struct SpectralData {
  std::string scope;  // "letters" (M_σ) or "factors" (M_{σ_2})
  PisotClass classification = PisotClass::Pisot;
  std::complex<double> eigenvalue;
  double modulus_lo = 0, modulus_hi = 0;
};

struct ImbalanceCertificate {
  int version = 1;
  std::string substitution;
  Word pattern;
  BigInt p = 0, q = 1;
  CertificateKind kind = CertificateKind::DivisibilityReturnWord;
  Word witness;             // return word w, or the middle letter a of bac
  Symbol left = 0, right = 0;  // b and c of bac
  unsigned level = 0;
  std::optional<ModularData> modular;
  std::optional<CycleData> cycle;
  std::optional<SpectralData> spectral;
};

struct PotentialResult {
  bool consistent = false;
  PhiVector phi;
  std::vector<BigInt> potential;  // per letter, when consistent
  std::optional<CycleData> cycle;
};

namespace detail {

struct Step {
  Symbol from, to;
  bool forward;  // traversed along the block's direction
};

// Inconsistent closed walk in the (undirected) 2-block graph turned into a
// simple directed cycle with nonzero qφ-sum.
inline CycleData inconsistent_cycle(std::size_t d, const std::vector<Word>& blocks, const std::vector<BigInt>& w,
                                    std::size_t bad, const std::vector<long>& parent_edge,
                                    const std::vector<bool>& parent_forward) {
  std::map<std::pair<Symbol, Symbol>, BigInt> weight;
  std::vector<std::vector<Symbol>> out(d);
  for (std::size_t e = 0; e < blocks.size(); ++e) {
    weight[{blocks[e][0], blocks[e][1]}] = w[e];
    out[blocks[e][0]].push_back(blocks[e][1]);
  }
  auto shortest = [&](Symbol from, Symbol to) {
    std::vector<long> prev(d, -2);
    std::deque<Symbol> queue{from};
    prev[from] = -1;
    while (!queue.empty()) {
      Symbol x = queue.front();
      queue.pop_front();
      for (Symbol y : out[x]) {
        if (prev[y] != -2) continue;
        prev[y] = x;
        queue.push_back(y);
      }
    }
    if (prev[to] == -2) throw Error("2-block graph is not strongly connected");
    std::vector<Symbol> path{to};
    Symbol x = to;
    do {
      x = static_cast<Symbol>(prev[x]);
      path.push_back(x);
    } while (x != from);
    std::reverse(path.begin(), path.end());
    return path;  // from ... to
  };
  // Tree path root -> x as undirected steps.
  auto tree_path = [&](Symbol x) {
    std::vector<Step> up;
    while (parent_edge[x] >= 0) {
      const Word& b = blocks[static_cast<std::size_t>(parent_edge[x])];
      Symbol p = parent_forward[x] ? b[0] : b[1];
      up.push_back({p, x, parent_forward[x]});
      x = p;
    }
    std::reverse(up.begin(), up.end());
    return up;
  };
  std::vector<Step> walk = tree_path(blocks[bad][0]);
  walk.push_back({blocks[bad][0], blocks[bad][1], true});
  auto back = tree_path(blocks[bad][1]);
  for (auto it = back.rbegin(); it != back.rend(); ++it) walk.push_back({it->to, it->from, !it->forward});

  std::vector<Symbol> verts{walk.front().from};
  for (const auto& st : walk) {
    if (st.forward) {
      verts.push_back(st.to);
    } else {
      auto path = shortest(st.from, st.to);
      verts.insert(verts.end(), path.begin() + 1, path.end());
    }
  }
  auto cycle_of = [&](const std::vector<Symbol>& vs) {
    CycleData c;
    for (std::size_t i = 0; i + 1 < vs.size(); ++i) {
      c.blocks.push_back(Word{vs[i], vs[i + 1]});
      c.qphi_sum += weight.at({vs[i], vs[i + 1]});
    }
    return c;
  };
  // Split the directed closed walk into simple cycles.
  std::vector<Symbol> stack;
  std::vector<CycleData> simple;
  for (Symbol x : verts) {
    auto it = std::find(stack.begin(), stack.end(), x);
    if (it != stack.end()) {
      std::vector<Symbol> cyc(it, stack.end());
      cyc.push_back(x);
      simple.push_back(cycle_of(cyc));
      stack.erase(it + 1, stack.end());
    } else {
      stack.push_back(x);
    }
  }
  for (const auto& c : simple)
    if (c.qphi_sum != 0) return c;
  // The directed walk balanced out, so one of the edge-plus-return cycles did not.
  for (const auto& st : walk) {
    if (st.forward) continue;
    std::vector<Symbol> cyc{st.to};
    auto path = shortest(st.from, st.to);
    cyc.insert(cyc.end(), path.begin(), path.end());
    CycleData c = cycle_of(cyc);
    if (c.qphi_sum != 0) return c;
  }
  throw Error("internal: inconsistent potential without a nonzero cycle");
}

}  // namespace detail

// φ = βF decided by breadth-first potential assignment on the 2-block graph.
inline PotentialResult potential_from_phi(std::size_t alphabet_size, const PhiVector& ph) {
  const std::size_t d = alphabet_size;
  PotentialResult res;
  res.phi = ph;
  std::vector<std::optional<BigInt>> f(d);
  std::vector<long> parent_edge(d, -1);
  std::vector<bool> parent_forward(d, true);
  std::deque<Symbol> queue{0};
  f[0] = BigInt(0);
  while (!queue.empty()) {
    Symbol x = queue.front();
    queue.pop_front();
    for (std::size_t e = 0; e < ph.blocks.size(); ++e) {
      const Word& b = ph.blocks[e];
      if (b[0] == x && !f[b[1]]) {
        f[b[1]] = *f[x] + ph.qphi[e];
        parent_edge[b[1]] = static_cast<long>(e);
        parent_forward[b[1]] = true;
        queue.push_back(b[1]);
      } else if (b[1] == x && !f[b[0]]) {
        f[b[0]] = *f[x] - ph.qphi[e];
        parent_edge[b[0]] = static_cast<long>(e);
        parent_forward[b[0]] = false;
        queue.push_back(b[0]);
      }
    }
  }
  for (const auto& x : f)
    if (!x) throw Error("2-block graph is not connected");
  for (std::size_t e = 0; e < ph.blocks.size(); ++e) {
    const Word& b = ph.blocks[e];
    if (*f[b[1]] - *f[b[0]] != ph.qphi[e]) {
      res.cycle = detail::inconsistent_cycle(d, ph.blocks, ph.qphi, e, parent_edge, parent_forward);
      return res;
    }
  }
  res.consistent = true;
  for (const auto& x : f) res.potential.push_back(*x);
  return res;
}

inline PotentialResult potential_test(const Substitution& s, WordView v, unsigned n, const Rational& mu) {
  const unsigned threshold = admissible_level(s, v.size());
  if (n < threshold) throw Error("level " + std::to_string(n) + " below threshold k+d = " + std::to_string(threshold));
  return potential_from_phi(s.size(), phi_vector(s, v, n, mu));
}

inline PotentialResult potential_test(const Substitution& s, WordView v, std::optional<unsigned> n = std::nullopt) {
  return potential_test(s, v, n ? *n : admissible_level(s, v.size()), exact_frequency(s, v));
}

// Everything the certificate searches share for one substitution.
class CertificateEngine {
 public:
  explicit CertificateEngine(Substitution s)
      : s_(std::move(s)), m_(substitution_matrix(s_)), l2_(two_letter_language(s_)) {
    require_primitive(s_, "substitution is not primitive");
    l3_ = language(s_, 3);
    for (Symbol a = 0; a < s_.size(); ++a) returns_.push_back(return_words(s_, a));
  }

  const Substitution& substitution() const { return s_; }
  const IntegerMatrix& matrix() const { return m_; }
  const FactorSet& two_blocks() const { return l2_; }

  const ModularPeriod& period(std::uint64_t q) {
    auto it = periods_.find(q);
    if (it == periods_.end()) it = periods_.emplace(q, power_mod_period(m_, q)).first;
    return it->second;
  }

  // Witnesses in fixed order: letters a with aa in L_2, first return words
  // (shortlex, per letter), then triples bac in L_3 with bc in L_2.
  std::optional<ImbalanceCertificate> divisibility(WordView v, const Rational& mu, bool include_bac = true) {
    const BigInt p = boost::multiprecision::numerator(mu), q = boost::multiprecision::denominator(mu);
    if (q < 2) return std::nullopt;
    if (q > BigInt(std::numeric_limits<std::uint32_t>::max())) throw Error("frequency denominator too large");
    const std::uint64_t qq = q.convert_to<std::uint64_t>();
    const unsigned threshold = admissible_level(s_, v.size());
    const ModularPeriod& mp = period(qq);
    const std::size_t start = std::max<std::size_t>(mp.preperiod, threshold);

    struct Candidate {
      CertificateKind kind;
      Word word;
      Symbol left = 0, right = 0;
    };
    std::vector<Candidate> cands;
    for (Symbol a = 0; a < s_.size(); ++a)
      if (l2_.contains(Word{a, a})) cands.push_back({CertificateKind::DivisibilityReturnWord, Word{a}});
    for (const auto& rw : returns_)
      for (const auto& w : rw.words)
        if (w.size() > 1) cands.push_back({CertificateKind::DivisibilityReturnWord, w});
    if (include_bac)
      for (const auto& bac : l3_)
        if (l2_.contains(Word{bac[0], bac[2]}))
          cands.push_back({CertificateKind::DivisibilityBACBC, Word{bac[1]}, bac[0], bac[2]});

    std::vector<std::vector<std::uint64_t>> residues(cands.size());
    parallel_for(cands.size(), [&](std::size_t i) {
      auto x = to_big(abelianize(cands[i].word, s_.size()));
      for (std::size_t t = 0; t < mp.period; ++t) residues[i].push_back(length_residue(mp, x, start + t));
    });
    for (std::size_t i = 0; i < cands.size(); ++i) {
      auto nz = std::find_if(residues[i].begin(), residues[i].end(), [](std::uint64_t r) { return r != 0; });
      if (nz == residues[i].end()) continue;
      ImbalanceCertificate c;
      c.substitution = s_.to_string();
      c.pattern.assign(v.begin(), v.end());
      c.p = p;
      c.q = q;
      c.kind = cands[i].kind;
      c.witness = cands[i].word;
      c.left = cands[i].left;
      c.right = cands[i].right;
      c.level = threshold;
      ModularData md;
      md.modulus = qq;
      md.rho = mp.preperiod;
      md.pi = mp.period;
      md.start = start;
      md.residues = residues[i];
      md.witness_level = static_cast<unsigned>(start + static_cast<std::size_t>(nz - residues[i].begin()));
      md.witness_length = image_length(m_, abelianize(c.witness, s_.size()), md.witness_level);
      c.modular = md;
      return c;
    }
    return std::nullopt;
  }

  std::optional<ImbalanceCertificate> potential(WordView v, const Rational& mu, std::optional<unsigned> level = std::nullopt) {
    const unsigned n = level ? *level : admissible_level(s_, v.size());
    PotentialResult pr = potential_test(s_, v, n, mu);
    if (pr.consistent) return std::nullopt;
    ImbalanceCertificate c;
    c.substitution = s_.to_string();
    c.pattern.assign(v.begin(), v.end());
    c.p = boost::multiprecision::numerator(mu);
    c.q = boost::multiprecision::denominator(mu);
    c.kind = CertificateKind::PotentialInconsistency;
    c.level = n;
    c.cycle = pr.cycle;
    return c;
  }

  // Divisibility first, then the potential test at level k+d.
  std::optional<ImbalanceCertificate> certify(WordView v, const Rational& mu) {
    if (auto c = divisibility(v, mu)) return c;
    return potential(v, mu);
  }

 private:
  Substitution s_;
  IntegerMatrix m_;
  FactorSet l2_, l3_;
  std::vector<ReturnWordSet> returns_;
  std::map<std::uint64_t, ModularPeriod> periods_;
};

inline std::optional<ImbalanceCertificate> divisibility_certificate(const Substitution& s, WordView v) {
  CertificateEngine eng(s);
  return eng.divisibility(v, exact_frequency(s, v));
}

// Constant length ℓ and symmetric M_σ force all letter frequencies to 1/d;
// part 1 of the divisibility criterion is then applied with q = d.
inline std::optional<ImbalanceCertificate> symmetric_constant_length_check(const Substitution& s) {
  require_primitive(s, "substitution is not primitive");
  if (!s.constant_length() || !substitution_matrix(s).symmetric()) throw Error("not constant-length symmetric");
  const Rational mu(1, static_cast<long>(s.size()));
  CertificateEngine eng(s);
  for (Symbol a = 0; a < s.size(); ++a)
    if (auto c = eng.divisibility(Word{a}, mu, false)) return c;
  return std::nullopt;
}

enum class BalanceVerdict { BalancedCertified, UnbalancedCertified, Inconclusive };

inline const char* to_string(BalanceVerdict v) {
  switch (v) {
    case BalanceVerdict::BalancedCertified:
      return "BalancedCertified";
    case BalanceVerdict::UnbalancedCertified:
      return "UnbalancedCertified";
    case BalanceVerdict::Inconclusive:
      return "Inconclusive";
  }
  return "?";
}

struct ScopeReport {
  IntegerMatrix matrix;
  Spectrum spectrum;
  PerronData perron;
  PisotClass classification = PisotClass::Pisot;
  BalanceVerdict verdict = BalanceVerdict::Inconclusive;
};

inline BalanceVerdict verdict_from(PisotClass c) {
  switch (c) {
    case PisotClass::Pisot:
      return BalanceVerdict::BalancedCertified;
    case PisotClass::SecondEigenvalueOutside:
    case PisotClass::UnitModulusNonRootOfUnity:
      return BalanceVerdict::UnbalancedCertified;
    case PisotClass::RootOfUnityPresent:
      return BalanceVerdict::Inconclusive;
  }
  return BalanceVerdict::Inconclusive;
}

inline ScopeReport scope_report(const IntegerMatrix& m) {
  ScopeReport r;
  r.matrix = m;
  r.spectrum = spectrum(m);
  r.perron = perron_data(m, r.spectrum);
  r.classification = pisot_classify(m, r.spectrum, r.perron);
  r.verdict = verdict_from(r.classification);
  return r;
}

struct SpectralBalanceReport {
  ScopeReport letters;
  ScopeReport factors;
};

inline SpectralBalanceReport spectral_balance_report(const Substitution& s) {
  require_primitive(s, "substitution is not primitive");
  return {scope_report(substitution_matrix(s)), scope_report(substitution_matrix(two_block_substitution(s).substitution))};
}

// A SpectralNecessary certificate for the scope when its classification
// violates the necessary condition; the claim is about the whole scope.
inline std::optional<ImbalanceCertificate> spectral_certificate(const Substitution& s, const ScopeReport& r,
                                                                const std::string& scope, WordView v) {
  if (r.verdict != BalanceVerdict::UnbalancedCertified) return std::nullopt;
  ImbalanceCertificate c;
  c.substitution = s.to_string();
  c.pattern.assign(v.begin(), v.end());
  c.kind = CertificateKind::SpectralNecessary;
  SpectralData sd;
  sd.scope = scope;
  sd.classification = r.classification;
  for (std::size_t i = 0; i < r.spectrum.roots.size(); ++i) {
    const Root& root = r.spectrum.roots[i];
    if (i == r.perron.root_index) continue;
    bool offending = r.classification == PisotClass::SecondEigenvalueOutside ? root.unit_side > 0
                                                                             : (root.unit_side == 0 && root.kind == RootKind::Algebraic);
    if (!offending) continue;
    sd.eigenvalue = root.approx;
    sd.modulus_lo = root.modulus_lo;
    sd.modulus_hi = root.modulus_hi;
    break;
  }
  c.spectral = sd;
  return c;
}

struct VerifyResult {
  bool ok = false;
  std::string reason;
};

namespace detail {

inline VerifyResult fail(std::string why) { return {false, std::move(why)}; }

inline BigInt literal_qphi(const Substitution& s, WordView v, unsigned n, const BigInt& p, const BigInt& q, WordView ab) {
  auto lens = image_lengths(s, n);
  if (lens[ab[0]] + lens[ab[1]] > literal_scan_limit) {
    // Too long to expand: fall back to transport from the resolving level.
    Rational mu(p, q);
    return phi_vector(s, v, n, mu).at(ab);
  }
  Word w = s.apply_power(ab, n);
  const std::size_t h = lens[ab[0]];
  BigInt count = 0;
  for_each_occurrence(WordView(w).first(h + v.size() - 1), v, [&](std::size_t j) {
    if (j < h) count += 1;
  });
  return q * count - p * BigInt(h);
}

}  // namespace detail

// Recomputes the certificate's arithmetic from its embedded substitution.
inline VerifyResult verify_certificate(const ImbalanceCertificate& c) {
  try {
    if (c.version != 1) return detail::fail("unsupported certificate version");
    Substitution s = Substitution::parse(c.substitution);
    if (!is_primitive(s).primitive) return detail::fail("substitution is not primitive");

    if (c.kind == CertificateKind::SpectralNecessary) {
      if (!c.spectral) return detail::fail("missing spectral data");
      IntegerMatrix m;
      if (c.spectral->scope == "letters") {
        m = substitution_matrix(s);
      } else if (c.spectral->scope == "factors") {
        m = substitution_matrix(two_block_substitution(s).substitution);
      } else {
        return detail::fail("unknown spectral scope");
      }
      PisotClass cls = pisot_classify(m);
      if (cls != c.spectral->classification) return detail::fail("classification does not match");
      if (verdict_from(cls) != BalanceVerdict::UnbalancedCertified) return detail::fail("classification does not refute balance");
      return {true, "spectral classification " + std::string(to_string(cls)) + " recomputed"};
    }

    if (c.pattern.empty()) return detail::fail("empty pattern");
    for (Symbol x : c.pattern)
      if (x >= s.size()) return detail::fail("pattern uses a foreign letter");
    if (!language(s, c.pattern.size()).contains(c.pattern)) return detail::fail("pattern not in language");
    if (c.q < 2 || boost::multiprecision::gcd(c.p, c.q) != 1) return detail::fail("frequency is not a reduced fraction with q >= 2");
    Rational mu(c.p, c.q);
    if (exact_frequency(s, c.pattern) != mu) return detail::fail("frequency does not match");
    const unsigned threshold = admissible_level(s, c.pattern.size());
    if (c.level < threshold) return detail::fail("level below threshold k+d = " + std::to_string(threshold));

    if (c.kind == CertificateKind::PotentialInconsistency) {
      if (!c.cycle || c.cycle->blocks.empty()) return detail::fail("missing cycle");
      const auto& blocks = c.cycle->blocks;
      FactorSet l2 = two_letter_language(s);
      BigInt sum = 0;
      for (std::size_t i = 0; i < blocks.size(); ++i) {
        const Word& b = blocks[i];
        if (b.size() != 2 || !l2.contains(b)) return detail::fail("cycle block not in L_2");
        if (b[1] != blocks[(i + 1) % blocks.size()][0]) return detail::fail("blocks do not form a directed cycle");
        sum += detail::literal_qphi(s, c.pattern, c.level, c.p, c.q, b);
      }
      if (sum != c.cycle->qphi_sum) return detail::fail("qphi sum does not match");
      if (sum == 0) return detail::fail("qphi sum is zero");
      return {true, "cycle qphi sum " + sum.str() + " recomputed"};
    }

    if (!c.modular) return detail::fail("missing modular data");
    const ModularData& md = *c.modular;
    if (BigInt(md.modulus) != c.q) return detail::fail("modulus differs from frequency denominator");
    if (c.witness.empty()) return detail::fail("empty witness");
    for (Symbol x : c.witness)
      if (x >= s.size()) return detail::fail("witness uses a foreign letter");
    if (c.kind == CertificateKind::DivisibilityReturnWord) {
      const Symbol a = c.witness.front();
      if (std::count(c.witness.begin(), c.witness.end(), a) != 1) return detail::fail("witness is not a first return word");
      Word wa = c.witness;
      wa.push_back(a);
      if (!language(s, wa.size()).contains(wa)) return detail::fail("witness is not a return word");
    } else {
      if (c.witness.size() != 1) return detail::fail("BAC witness must be one letter");
      if (c.left >= s.size() || c.right >= s.size()) return detail::fail("BAC witness uses a foreign letter");
      if (!language(s, 3).contains(Word{c.left, c.witness[0], c.right})) return detail::fail("bac not in language");
      if (!language(s, 2).contains(Word{c.left, c.right})) return detail::fail("bc not in language");
    }
    IntegerMatrix m = substitution_matrix(s);
    ModularPeriod mp = power_mod_period(m, md.modulus);
    if (mp.preperiod != md.rho || mp.period != md.pi) return detail::fail("period data does not match");
    if (md.start != std::max<std::size_t>(mp.preperiod, threshold)) return detail::fail("cycle start does not match");
    if (md.residues.size() != mp.period) return detail::fail("residue cycle has the wrong length");
    auto x = to_big(abelianize(c.witness, s.size()));
    bool nonzero = false;
    for (std::size_t t = 0; t < mp.period; ++t) {
      if (length_residue(mp, x, md.start + t) != md.residues[t]) return detail::fail("residue does not match");
      nonzero = nonzero || md.residues[t] != 0;
    }
    if (!nonzero) return detail::fail("every residue on the cycle is zero");
    if (md.witness_level < threshold) return detail::fail("witness level below threshold");
    BigInt len = image_length(m, abelianize(c.witness, s.size()), md.witness_level);
    if (len != md.witness_length) return detail::fail("witness length does not match");
    if (len % c.q == 0) return detail::fail("witness length is divisible by q");
    return {true, "|sigma^" + std::to_string(md.witness_level) + "(w)| = " + len.str() + " is not divisible by " + c.q.str()};
  } catch (const Error& e) {
    return detail::fail(e.what());
  }
}

}  // namespace balans

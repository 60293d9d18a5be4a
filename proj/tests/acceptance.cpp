// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>

#include "balans.hpp"
#include "oracles.hpp"

using namespace balans;

namespace {

constexpr double kSpectraSeconds = 1.0;
constexpr double kCertificateSeconds = 5.0;
constexpr double kBalanceSeconds = 30.0;
constexpr std::size_t kScanHorizon = 1000;
constexpr std::size_t kScanLength = 1000000;
constexpr std::size_t kPointwisePositions = 10000;

struct Outcome {
  bool ok = true;
  std::ostringstream notes;

  void require(bool cond, const std::string& what) {
    if (!cond) {
      ok = false;
      notes << " [failed: " << what << "]";
    }
  }
};

int failures = 0;

void criterion(int id, const char* title, double budget, const std::function<void(Outcome&)>& body) {
  Outcome out;
  auto t0 = std::chrono::steady_clock::now();
  try {
    body(out);
  } catch (const std::exception& e) {
    out.require(false, std::string("exception: ") + e.what());
  }
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (budget > 0) out.require(secs < budget, "runtime " + std::to_string(secs) + " s over budget");
  if (!out.ok) ++failures;
  std::printf("%s %d %s (%.2f s)%s\n", out.ok ? "PASS" : "FAIL", id, title, secs, out.notes.str().c_str());
  std::fflush(stdout);
}

IntPoly x_minus(long r) { return IntPoly{BigInt(-r), BigInt(1)}; }

IntPoly product(std::initializer_list<IntPoly> ps) {
  IntPoly out{BigInt(1)};
  for (const auto& p : ps) out = out * p;
  return out;
}

std::vector<Rational> exact_values(const FrequencyTable& t, Outcome& out) {
  std::vector<Rational> v;
  for (const auto& f : t.values) {
    out.require(f.exact, "frequency not exact");
    v.push_back(f.value);
  }
  return v;
}

}  // namespace

int main() {
  const Substitution tm = Substitution::parse("0->01;1->10");
  const Substitution fib = Substitution::parse("0->01;1->0");
  const Substitution chacon = Substitution::parse("1->1123;2->23;3->123");
  const Substitution toeplitz = Substitution::parse("0->01;1->00");
  const Substitution theta2 = Substitution::parse("1->121;2->32;3->321");
  const Substitution balanced3 = Substitution::parse("0->010;1->102;2->201");

  criterion(1, "spectra of Thue-Morse (k=1,2,3), Chacon and theta2", kSpectraSeconds, [&](Outcome& o) {
    Spectrum s1 = spectrum(substitution_matrix(tm));
    o.require(s1.char_poly == product({x_minus(2), x_minus(0)}), "TM char poly");
    Spectrum s2 = spectrum(substitution_matrix(two_block_substitution(tm).substitution));
    o.require(s2.char_poly == product({x_minus(0), x_minus(1), x_minus(-1), x_minus(2)}), "TM sigma2 char poly");
    o.require(s2.root_of_unity_orders() == std::vector<unsigned>{1, 2}, "TM sigma2 roots of unity");
    Spectrum s3 = spectrum(substitution_matrix(k_block_substitution(tm, 3).substitution));
    o.require(s3.zero_multiplicity == 3, "TM sigma3 zero multiplicity");
    o.require(s3.char_poly == product({x_minus(0), x_minus(0), x_minus(0), x_minus(1), x_minus(-1), x_minus(2)}),
              "TM sigma3 char poly");
    Spectrum sc = spectrum(substitution_matrix(chacon));
    o.require(sc.char_poly == product({x_minus(3), x_minus(1), x_minus(0)}), "Chacon char poly");
    o.require(sc.integer_roots.size() == 1 && sc.integer_roots[0].first == 3, "Chacon integer root 3");
    Spectrum st = spectrum(substitution_matrix(theta2));
    o.require(st.root_of_unity_orders() == std::vector<unsigned>{1}, "theta2 root 1");
    o.require(st.residual == IntPoly{BigInt(1), BigInt(-3), BigInt(1)}, "theta2 quadratic x^2-3x+1");
    o.notes << " theta2 residual " << to_string(st.residual);
  });

  criterion(2, "exact letter and 2-factor frequencies", 0, [&](Outcome& o) {
    using R = Rational;
    o.require(exact_values(letter_frequencies(chacon), o) == std::vector<R>{R(1, 3), R(1, 3), R(1, 3)}, "Chacon");
    o.require(exact_values(letter_frequencies(toeplitz), o) == std::vector<R>{R(2, 3), R(1, 3)}, "Toeplitz");
    o.require(exact_values(letter_frequencies(Substitution::parse("0->11;1->21;2->10")), o) ==
                  std::vector<R>{R(1, 7), R(4, 7), R(2, 7)},
              "0->11;1->21;2->10");
    o.require(exact_values(letter_frequencies(balanced3), o) == std::vector<R>{R(1, 2), R(1, 3), R(1, 6)},
              "0->010;1->102;2->201");
    o.require(exact_values(factor_frequencies(tm, 2), o) == std::vector<R>{R(1, 6), R(1, 3), R(1, 3), R(1, 6)},
              "TM 2-factors");
  });

  criterion(3, "imbalance certificates and their verification", kCertificateSeconds, [&](Outcome& o) {
    // (a) Chacon letters
    CertificateEngine ce(chacon);
    for (Symbol a = 0; a < 3; ++a) {
      auto c = ce.certify(Word{a}, exact_frequency(chacon, Word{a}));
      o.require(c.has_value() && verify_certificate(*c).ok, "Chacon letter certificate");
    }
    auto c1 = ce.divisibility(Word{0}, Rational(1, 3));
    o.require(c1.has_value() && c1->witness == Word{0}, "Chacon witness letter 1");
    if (c1) {
      const ModularPeriod& mp = ce.period(3);
      BigInt len6 = image_length(ce.matrix(), abelianize(Word{0}, 3), 6);
      o.require(len6 == 1093, "|sigma^6(1)| = 1093");
      o.require(length_residue(mp, to_big(abelianize(Word{0}, 3)), 6) == 1, "1093 mod 3 = 1");
      for (auto r : c1->modular->residues) o.require(r != 0, "zero on Chacon mod-3 cycle");
      o.notes << " chacon residues=" << c1->modular->residues.size() << "x" << c1->modular->residues[0];
    }
    // (b) Toeplitz letters
    auto ct = divisibility_certificate(toeplitz, Word{0});
    o.require(ct.has_value() && verify_certificate(*ct).ok, "Toeplitz certificate");
    if (ct) {
      std::set<std::uint64_t> res(ct->modular->residues.begin(), ct->modular->residues.end());
      o.require(res == std::set<std::uint64_t>{1, 2}, "Toeplitz cycle {2,1}");
    }
    // (c) Thue-Morse factors of length 2..8
    CertificateEngine te(tm);
    std::size_t total = 0;
    for (std::size_t n = 2; n <= 8; ++n)
      for (const auto& v : language(tm, n)) {
        auto c = te.certify(v, exact_frequency(tm, v));
        o.require(c.has_value(), "TM factor " + tm.alphabet().format(v) + " certificate");
        if (c) o.require(verify_certificate(*c).ok, "TM factor " + tm.alphabet().format(v) + " verifies");
        ++total;
      }
    o.notes << " tm_factors=" << total;
    // (d) 0->010;1->102;2->201 letters
    CertificateEngine be(balanced3);
    for (Symbol a = 0; a < 3; ++a)
      o.require(!be.certify(Word{a}, exact_frequency(balanced3, Word{a})).has_value(), "balanced example certified");
    // (e) symmetric constant length
    auto cs = symmetric_constant_length_check(Substitution::parse("0->001;1->101"));
    o.require(cs.has_value() && verify_certificate(*cs).ok, "0->001;1->101 certificate");
  });

  criterion(4, "tower transitions equal transposed M_sigma2 powers", 0, [&](Outcome& o) {
    for (const Substitution* s : {&tm, &fib}) {
      BlockSubstitution bs = two_block_substitution(*s);
      IntegerMatrix m2 = substitution_matrix(bs.substitution);
      for (unsigned r : {1u, 2u}) {
        IntegerMatrix mt = matrix_power(m2, r).transpose();
        for (unsigned n : {1u, 2u, 3u})
          for (Symbol x = 0; x < m2.dim(); ++x)
            for (Symbol y = 0; y < m2.dim(); ++y)
              o.require(BigInt(oracle::tower_transitions(*s, bs.coding.decode[x], bs.coding.decode[y], n, r)) == mt(x, y),
                        "transition count");
      }
    }
  });

  criterion(5, "phi literal sums, closed forms and recursion", 0, [&](Outcome& o) {
    IntegerMatrix m2 = substitution_matrix(two_block_substitution(tm).substitution);
    for (const char* pat : {"00", "01"}) {
      Word v = tm.alphabet().parse(pat);
      Rational mu = exact_frequency(tm, v);
      for (unsigned n : {5u, 6u}) {
        PhiVector closed = phi_from_tower(alpha_counts(tm, v, n), v, mu);
        o.require(phi_literal_sum(tm, v, n, mu) == closed.qphi, std::string("literal sum ") + pat);
        PhiVector next = phi_from_tower(alpha_counts(tm, v, n + 1), v, mu);
        o.require(transport(m2, closed.qphi, 1) == next.qphi, std::string("recursion ") + pat);
      }
    }
  });

  criterion(6, "balance scans", kBalanceSeconds, [&](Outcome& o) {
    Word ftext = generate_text(fib, kScanLength);
    for (Symbol a = 0; a < 2; ++a) {
      auto bp = balance_profile(ftext, Word{a}, kScanHorizon);
      o.require(bp.max() == 1, "Fibonacci letter max B = 1");
    }
    // brute-force bound for TM letters over every window of sigma^14(0)
    Word small = oracle::power(tm, Word{0}, 14);
    std::int64_t brute = 0;
    for (std::size_t n = 1; n <= kScanHorizon; ++n) brute = std::max(brute, oracle::window_balance(small, Word{0}, n));
    Word ttext = generate_text(tm, kScanLength);
    std::int64_t tm_letters = 0;
    for (Symbol a = 0; a < 2; ++a) tm_letters = std::max(tm_letters, balance_profile(ttext, Word{a}, kScanHorizon).max());
    o.require(tm_letters <= brute, "TM letters within brute-force bound");
    o.notes << " tm_letter_max=" << tm_letters << " brute=" << brute;
    // TM 00 over growing texts, windows up to L/2 sampled with stride L/2000
    Word v = tm.alphabet().parse("00");
    std::int64_t prev = -1;
    o.notes << " tm00=";
    for (std::size_t l : {10000u, 100000u, 1000000u}) {
      auto bp = balance_profile(WordView(ttext).first(l), v, l / 2, l / 2000);
      o.require(bp.max() > prev, "TM 00 profile strictly increasing");
      o.notes << bp.max() << (l < 1000000 ? "," : "");
      prev = bp.max();
    }
  });

  criterion(7, "extension graphs and cylinder decompositions", 0, [&](Outcome& o) {
    LanguageCache flang(fib, 14);
    o.require(dendric_check(flang, 12).all_trees, "Fibonacci trees to length 12");
    DendricReport tr = dendric_check(tm, 1);
    o.require(!tr.all_trees && tr.first_failure && tr.first_failure->word.empty(), "TM fails at empty word");
    Word text = generate_text(fib, 2 * kPointwisePositions);
    for (const char* pat : {"00", "01", "10", "010", "001"}) {
      Word v = fib.alphabet().parse(pat);
      Decomposition d = cylinder_decomposition(flang, v);
      const std::size_t lo = static_cast<std::size_t>(std::max(0L, -d.min_offset()));
      for (std::size_t p = lo; p < lo + kPointwisePositions; ++p) {
        bool hit = std::equal(v.begin(), v.end(), text.begin() + static_cast<long>(p));
        if (d.evaluate(text, p) != (hit ? 1 : 0)) {
          o.require(false, std::string("pointwise ") + pat);
          break;
        }
      }
    }
  });

  criterion(8, "letters-vs-factors probe on Fibonacci", 0, [&](Outcome& o) {
    ProbeReport r = letters_vs_factors_probe(fib, 6, kScanHorizon, 100000);
    o.require(r.letters_bounded, "letters bounded");
    o.require(r.verdicts_agree, "verdicts agree");
    o.require(r.bound_dominates, "bound dominates observed factor balance");
    std::int64_t worst = 0, kmax = 0;
    for (const auto& e : r.factors) {
      worst = std::max(worst, e.observed);
      kmax = std::max(kmax, e.weight);
    }
    o.notes << " C=" << r.letter_bound << " maxK=" << kmax << " max_factor_B=" << worst;
  });

  criterion(9, "Arnoux-Rauzy run bound", 0, [&](Outcome& o) {
    DirectiveSequence d = DirectiveSequence::parse("d=3; period=1,2,3");
    auto h = ar_run_bound(d);
    o.require(h == 1u, "h = 1");
    Word w = ar_generate(d, 100000);
    std::int64_t worst = 0;
    for (Symbol a = 0; a < 3; ++a) worst = std::max(worst, balance_profile(w, Word{a}, kScanHorizon).max());
    o.require(worst <= 3, "observed letter balance <= 3");
    o.notes << " observed=" << worst;
    bool rejected = false;
    try {
      ar_generate(DirectiveSequence::parse("d=3; period=1,2"), 100);
    } catch (const Error& e) {
      rejected = std::string(e.what()) == "directive not recurrent";
    }
    o.require(rejected, "missing letter rejected");
  });

  std::printf("%s: %d failing criteria\n", failures ? "FAIL" : "PASS", failures);
  return failures ? 1 : 0;
}

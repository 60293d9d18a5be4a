#include <gtest/gtest.h>

#include "balans/analysis.hpp"
#include "balans/certificate.hpp"
#include "balans/json_io.hpp"
#include "oracles.hpp"

using namespace balans;

namespace {

const char* kTM = "0->01;1->10";
const char* kChacon = "1->1123;2->23;3->123";
const char* kToeplitz = "0->01;1->00";
const char* kBalancedThree = "0->010;1->102;2->201";

}  // namespace

TEST(Divisibility, ChaconLetters) {
  Substitution s = Substitution::parse(kChacon);
  for (Symbol a = 0; a < 3; ++a) {
    auto c = divisibility_certificate(s, Word{a});
    ASSERT_TRUE(c.has_value());
    EXPECT_EQ(c->q, BigInt(3));
    EXPECT_TRUE(verify_certificate(*c).ok) << verify_certificate(*c).reason;
  }
  auto c = divisibility_certificate(s, Word{0});
  EXPECT_EQ(c->kind, CertificateKind::DivisibilityReturnWord);
  EXPECT_EQ(c->witness, Word{0});
  for (auto r : c->modular->residues) EXPECT_NE(r, 0u);
}

TEST(Divisibility, Toeplitz) {
  Substitution s = Substitution::parse(kToeplitz);
  auto c = divisibility_certificate(s, Word{0});
  ASSERT_TRUE(c.has_value());
  EXPECT_EQ(c->witness, Word{0});
  std::set<std::uint64_t> res(c->modular->residues.begin(), c->modular->residues.end());
  EXPECT_EQ(res, (std::set<std::uint64_t>{1, 2}));
  EXPECT_TRUE(verify_certificate(*c).ok);
}

TEST(Divisibility, BalancedThreeLetterExampleHasNone) {
  Substitution s = Substitution::parse(kBalancedThree);
  CertificateEngine eng(s);
  for (Symbol a = 0; a < 3; ++a) {
    Rational mu = exact_frequency(s, Word{a});
    EXPECT_FALSE(eng.divisibility(Word{a}, mu).has_value());
    EXPECT_FALSE(eng.certify(Word{a}, mu).has_value());
  }
}

TEST(Divisibility, ReturnWordLengthsAreTwoTimesPowersOfThree) {
  Substitution s = Substitution::parse(kBalancedThree);
  IntegerMatrix m = substitution_matrix(s);
  Word w = s.alphabet().parse("01");
  for (unsigned n = 0; n <= 8; ++n) EXPECT_EQ(image_length(m, abelianize(w, 3), n), BigInt(2 * static_cast<long>(std::pow(3, n))));
}

TEST(Potential, ThueMorseInconsistent) {
  Substitution s = Substitution::parse(kTM);
  Word v = s.alphabet().parse("00");
  PotentialResult pr = potential_test(s, v);
  EXPECT_FALSE(pr.consistent);
  ASSERT_TRUE(pr.cycle.has_value());
  EXPECT_NE(pr.cycle->qphi_sum, 0);
  CertificateEngine eng(s);
  auto c = eng.potential(v, exact_frequency(s, v));
  ASSERT_TRUE(c.has_value());
  EXPECT_TRUE(verify_certificate(*c).ok) << verify_certificate(*c).reason;
}

TEST(Potential, ConsistentCases) {
  Substitution s = Substitution::parse(kBalancedThree);
  PotentialResult pr = potential_test(s, Word{0});
  EXPECT_TRUE(pr.consistent);
  // the potential reproduces every qφ value as a difference
  for (std::size_t e = 0; e < pr.phi.blocks.size(); ++e) {
    const Word& ab = pr.phi.blocks[e];
    EXPECT_EQ(pr.phi.qphi[e], pr.potential[ab[1]] - pr.potential[ab[0]]);
  }
}

TEST(Potential, ReturnWordSumsVanishWhenConsistent) {
  Substitution s = Substitution::parse(kBalancedThree);
  for (Symbol a = 0; a < 3; ++a) {
    PotentialResult pr = potential_test(s, Word{a});
    ASSERT_TRUE(pr.consistent);
    for (const auto& w : return_words(s, a).words) {
      Word wa = w;
      wa.push_back(a);
      BigInt sum = 0;
      for (std::size_t i = 0; i + 1 < wa.size(); ++i) sum += pr.phi.at(Word{wa[i], wa[i + 1]});
      EXPECT_EQ(sum, 0);
    }
  }
}

TEST(Potential, LevelBelowThresholdRejected) {
  Substitution s = Substitution::parse(kTM);
  try {
    potential_test(s, s.alphabet().parse("00"), 2u);
    FAIL();
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("5"), std::string::npos) << e.what();
  }
}

TEST(Potential, InconsistencyImpliesGrowingProfile) {
  Substitution s = Substitution::parse(kTM);
  Word v = s.alphabet().parse("00");
  ASSERT_FALSE(potential_test(s, v).consistent);
  std::int64_t prev = -1;
  for (std::size_t l : {10000u, 100000u}) {
    Word text = generate_text(s, l);
    auto bp = balance_profile(text, v, l / 2, l / 2000);
    EXPECT_GT(bp.max(), prev);
    prev = bp.max();
  }
}

TEST(Certify, ThueMorseAllFactors) {
  Substitution s = Substitution::parse(kTM);
  CertificateEngine eng(s);
  for (std::size_t n = 2; n <= 5; ++n)
    for (const auto& v : language(s, n)) {
      auto c = eng.certify(v, exact_frequency(s, v));
      ASSERT_TRUE(c.has_value()) << s.alphabet().format(v);
      EXPECT_TRUE(verify_certificate(*c).ok);
    }
}

TEST(Symmetric, ConstantLengthPath) {
  auto c = symmetric_constant_length_check(Substitution::parse("0->001;1->101"));
  ASSERT_TRUE(c.has_value());
  EXPECT_EQ(c->q, BigInt(2));
  EXPECT_TRUE(verify_certificate(*c).ok);
  EXPECT_FALSE(symmetric_constant_length_check(Substitution::parse(kTM)).has_value());
  try {
    symmetric_constant_length_check(Substitution::parse("0->01;1->0"));
    FAIL();
  } catch (const Error& e) {
    EXPECT_STREQ(e.what(), "not constant-length symmetric");
  }
}

TEST(Verify, TamperedCertificatesRejected) {
  Substitution s = Substitution::parse(kChacon);
  auto c = *divisibility_certificate(s, Word{0});
  auto bad = c;
  bad.modular->residues[0] = 0;
  EXPECT_FALSE(verify_certificate(bad).ok);
  bad = c;
  bad.modular->witness_length += 1;
  EXPECT_FALSE(verify_certificate(bad).ok);
  bad = c;
  bad.p = 2;
  EXPECT_FALSE(verify_certificate(bad).ok);
  bad = c;
  bad.witness = Word{1, 2};
  EXPECT_FALSE(verify_certificate(bad).ok);

  Substitution tm = Substitution::parse(kTM);
  Word v = tm.alphabet().parse("00");
  CertificateEngine eng(tm);
  auto pc = *eng.potential(v, exact_frequency(tm, v));
  auto pbad = pc;
  pbad.cycle->qphi_sum += 1;
  EXPECT_FALSE(verify_certificate(pbad).ok);
  pbad = pc;
  pbad.level = 2;
  EXPECT_FALSE(verify_certificate(pbad).ok);
}

TEST(Json, CertificateRoundTrip) {
  std::vector<ImbalanceCertificate> certs;
  certs.push_back(*divisibility_certificate(Substitution::parse(kChacon), Word{1}));
  Substitution tm = Substitution::parse(kTM);
  CertificateEngine eng(tm);
  for (const char* pat : {"00", "010", "0110"}) {
    Word v = tm.alphabet().parse(pat);
    certs.push_back(*eng.certify(v, exact_frequency(tm, v)));
    if (auto p = eng.potential(v, exact_frequency(tm, v))) certs.push_back(*p);
  }
  SpectralBalanceReport sr = spectral_balance_report(Substitution::parse("0->0001;1->0111"));
  certs.push_back(*spectral_certificate(Substitution::parse("0->0001;1->0111"), sr.letters, "letters", Word{0}));
  for (const auto& c : certs) {
    Json j = to_json(c);
    ImbalanceCertificate back = certificate_from_json(Json::parse(j.dump()));
    EXPECT_EQ(to_json(back).dump(), j.dump());
    EXPECT_TRUE(verify_certificate(back).ok) << j.dump() << " " << verify_certificate(back).reason;
  }
}

TEST(Json, MalformedCertificateRejected) {
  Json j = to_json(*divisibility_certificate(Substitution::parse(kChacon), Word{1}));
  j.erase("modular");
  EXPECT_FALSE(verify_certificate(certificate_from_json(j)).ok);
  j.erase("kind");
  EXPECT_THROW(certificate_from_json(j), Error);
}

TEST(Spectral, Reports) {
  auto tm = spectral_balance_report(Substitution::parse(kTM));
  EXPECT_EQ(tm.letters.verdict, BalanceVerdict::BalancedCertified);
  EXPECT_EQ(tm.factors.verdict, BalanceVerdict::Inconclusive);
  auto fib = spectral_balance_report(Substitution::parse("0->01;1->0"));
  EXPECT_EQ(fib.letters.verdict, BalanceVerdict::BalancedCertified);
  EXPECT_EQ(fib.factors.verdict, BalanceVerdict::BalancedCertified);
  auto th = spectral_balance_report(Substitution::parse("1->121;2->32;3->321"));
  EXPECT_EQ(th.letters.verdict, BalanceVerdict::Inconclusive);
}

TEST(Analysis, Dossiers) {
  AnalysisReport tm = analyze(Substitution::parse(kTM));
  for (const auto& pv : tm.letters) EXPECT_EQ(pv.verdict, BalanceVerdict::BalancedCertified);
  for (const auto& pv : tm.factors) {
    EXPECT_EQ(pv.verdict, BalanceVerdict::UnbalancedCertified);
    ASSERT_TRUE(pv.certificate.has_value());
    EXPECT_NE(pv.certificate->kind, CertificateKind::PotentialInconsistency);
  }
  AnalysisReport ch = analyze(Substitution::parse(kChacon));
  for (const auto& pv : ch.letters) EXPECT_EQ(pv.verdict, BalanceVerdict::UnbalancedCertified);
  AnalysisReport tp = analyze(Substitution::parse(kToeplitz));
  for (const auto& pv : tp.letters) EXPECT_EQ(pv.verdict, BalanceVerdict::UnbalancedCertified);
  AnalysisReport b3 = analyze(Substitution::parse(kBalancedThree));
  for (const auto& pv : b3.letters) EXPECT_EQ(pv.verdict, BalanceVerdict::Inconclusive);
  Json j = to_json(b3);
  EXPECT_EQ(Json::parse(j.dump()), j);
}

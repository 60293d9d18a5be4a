#include <gtest/gtest.h>

#include <random>

#include "balans/linalg.hpp"
#include "oracles.hpp"

using namespace balans;

namespace {

IntegerMatrix matrix_of(const char* spec) { return substitution_matrix(Substitution::parse(spec)); }

IntPoly x_minus(long r) { return IntPoly{BigInt(-r), BigInt(1)}; }

IntPoly product(std::initializer_list<IntPoly> ps) {
  IntPoly out{BigInt(1)};
  for (const auto& p : ps) out = out * p;
  return out;
}

IntegerMatrix random_matrix(std::mt19937& rng, std::size_t d) {
  IntegerMatrix m(d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) m(i, j) = static_cast<long>(rng() % 7) - 3;
  return m;
}

}  // namespace

TEST(Polynomial, ArithmeticAndPrinting) {
  IntPoly p{BigInt(1), BigInt(-3), BigInt(1)};
  EXPECT_EQ(to_string(p), "x^2 - 3*x + 1");
  EXPECT_EQ(p.degree(), 2);
  EXPECT_EQ(p.eval<BigInt>(BigInt(2)), BigInt(-1));
  EXPECT_EQ(*divide_exact(x_minus(1) * x_minus(2), x_minus(2)), x_minus(1));
  EXPECT_FALSE(divide_exact(x_minus(1) * x_minus(2), x_minus(3)).has_value());
}

TEST(Polynomial, Cyclotomic) {
  EXPECT_EQ(cyclotomic(1), x_minus(1));
  EXPECT_EQ(cyclotomic(2), x_minus(-1));
  EXPECT_EQ(cyclotomic(6), (IntPoly{BigInt(1), BigInt(-1), BigInt(1)}));
  for (unsigned m = 1; m <= 30; ++m) EXPECT_EQ(cyclotomic(m).degree(), static_cast<long>(euler_phi(m))) << m;
  // x^12 - 1 is the product of Φ_d over d | 12.
  IntPoly prod{BigInt(1)};
  for (unsigned d : {1, 2, 3, 4, 6, 12}) prod = prod * cyclotomic(d);
  std::vector<BigInt> c(13, BigInt(0));
  c[0] = -1;
  c[12] = 1;
  EXPECT_EQ(prod, IntPoly(c));
}

TEST(Polynomial, SquarefreeDecomposition) {
  IntPoly p = product({x_minus(1), x_minus(2), x_minus(2), x_minus(3), x_minus(3), x_minus(3)});
  auto parts = squarefree_decomposition(p);
  ASSERT_EQ(parts.size(), 3u);
  EXPECT_EQ(parts[0], x_minus(1));
  EXPECT_EQ(parts[1], x_minus(2));
  EXPECT_EQ(parts[2], x_minus(3));
}

TEST(Polynomial, SturmCount) {
  IntPoly p = product({x_minus(-1), x_minus(1), x_minus(3)});
  EXPECT_EQ(sturm_count(p, Rational(-2), Rational(2)), 2u);
  EXPECT_EQ(sturm_count(p, Rational(2), Rational(4)), 1u);
}

TEST(SubstitutionMatrix, Examples) {
  EXPECT_EQ(matrix_of("0->01;1->10"), IntegerMatrix(2, {1, 1, 1, 1}));
  IntegerMatrix ch = matrix_of("1->1123;2->23;3->123");
  EXPECT_EQ(ch, IntegerMatrix(3, {2, 0, 1, 1, 1, 1, 1, 1, 1}));
  EXPECT_EQ(matrix_of("0->0;1->1"), IntegerMatrix::identity(2));
}

TEST(SubstitutionMatrix, ColumnSumsAreImageLengths) {
  Substitution s = Substitution::parse("1->1123;2->23;3->123");
  auto sums = substitution_matrix(s).column_sums();
  for (Symbol b = 0; b < s.size(); ++b) EXPECT_EQ(sums[b], BigInt(s.image(b).size()));
}

TEST(SubstitutionMatrix, ImageLengthsByMatrixPowers) {
  for (auto spec : {"0->01;1->10", "0->01;1->0", "1->1123;2->23;3->123", "0->11;1->21;2->10"}) {
    Substitution s = Substitution::parse(spec);
    IntegerMatrix m = substitution_matrix(s);
    Word w = generate_text(s, 5);
    for (unsigned n = 0; n <= 8; ++n)
      EXPECT_EQ(image_length(m, abelianize(w, s.size()), n), BigInt(oracle::power(s, w, n).size())) << spec << " n=" << n;
  }
}

TEST(CharPoly, Examples) {
  EXPECT_EQ(char_poly(matrix_of("0->01;1->10")), product({x_minus(2), x_minus(0)}));
  EXPECT_EQ(char_poly(matrix_of("1->1123;2->23;3->123")), product({x_minus(3), x_minus(1), x_minus(0)}));
  EXPECT_EQ(char_poly(matrix_of("1->121;2->32;3->321")),
            product({x_minus(1), IntPoly{BigInt(1), BigInt(-3), BigInt(1)}}));
}

TEST(CharPoly, MatchesDeterminantOracle) {
  std::mt19937 rng(5);
  for (std::size_t d = 1; d <= 6; ++d)
    for (int trial = 0; trial < 10; ++trial) {
      IntegerMatrix m = random_matrix(rng, d);
      IntPoly cp = char_poly(m);
      ASSERT_EQ(cp.degree(), static_cast<long>(d));
      for (long t = -3; t <= static_cast<long>(d) + 1; ++t)
        ASSERT_EQ(cp.eval<BigInt>(BigInt(t)), oracle::det_shifted(m, BigInt(t)));
    }
}

TEST(CharPoly, CayleyHamilton) {
  std::mt19937 rng(9);
  for (std::size_t d = 1; d <= 6; ++d)
    for (int trial = 0; trial < 5; ++trial) {
      IntegerMatrix m = random_matrix(rng, d);
      IntPoly cp = char_poly(m);
      IntegerMatrix acc(d), power = IntegerMatrix::identity(d);
      for (const auto& c : cp.coeffs()) {
        acc = acc + c * power;
        power = power * m;
      }
      EXPECT_EQ(acc, IntegerMatrix(d));
    }
}

TEST(Spectrum, ThueMorseBlockLevels) {
  Substitution tm = Substitution::parse("0->01;1->10");
  Spectrum s2 = spectrum(substitution_matrix(two_block_substitution(tm).substitution));
  EXPECT_EQ(s2.char_poly, product({x_minus(0), x_minus(1), x_minus(-1), x_minus(2)}));
  EXPECT_EQ(s2.root_of_unity_orders(), (std::vector<unsigned>{1, 2}));
  Spectrum s3 = spectrum(substitution_matrix(k_block_substitution(tm, 3).substitution));
  EXPECT_EQ(s3.zero_multiplicity, 3u);
  EXPECT_EQ(s3.char_poly, product({x_minus(0), x_minus(0), x_minus(0), x_minus(1), x_minus(-1), x_minus(2)}));
}

TEST(Spectrum, Theta2) {
  Spectrum sp = spectrum(matrix_of("1->121;2->32;3->321"));
  EXPECT_EQ(sp.root_of_unity_orders(), (std::vector<unsigned>{1}));
  EXPECT_EQ(sp.residual, (IntPoly{BigInt(1), BigInt(-3), BigInt(1)}));
  auto ev = eigenvalues(sp);
  std::vector<double> re;
  for (auto z : ev) re.push_back(z.real());
  std::sort(re.begin(), re.end());
  ASSERT_EQ(re.size(), 3u);
  EXPECT_NEAR(re[0], (3 - std::sqrt(5.0)) / 2, 1e-12);
  EXPECT_NEAR(re[1], 1.0, 1e-12);
  EXPECT_NEAR(re[2], (3 + std::sqrt(5.0)) / 2, 1e-12);
}

TEST(Spectrum, ComplexRootsAndModulusEnclosures) {
  // x^3 - x - 1 (plastic number) has a complex pair of modulus < 1.
  Spectrum sp = spectrum(IntPoly{BigInt(-1), BigInt(-1), BigInt(0), BigInt(1)});
  ASSERT_EQ(sp.roots.size(), 3u);
  int inside = 0;
  for (const auto& r : sp.roots) {
    EXPECT_LE(r.modulus_lo, std::abs(r.approx) + 1e-12);
    EXPECT_GE(r.modulus_hi, std::abs(r.approx) - 1e-12);
    inside += r.unit_side < 0;
  }
  EXPECT_EQ(inside, 2);
}

TEST(Spectrum, UnitCircleNonRootOfUnity) {
  // Salem-type quartic x^4 - x^3 - x^2 - x + 1 has two roots on the unit circle.
  Spectrum sp = spectrum(IntPoly{BigInt(1), BigInt(-1), BigInt(-1), BigInt(-1), BigInt(1)});
  int on = 0;
  for (const auto& r : sp.roots) on += r.unit_side == 0;
  EXPECT_EQ(on, 2);
  EXPECT_TRUE(sp.cyclotomic.empty());
}

TEST(Perron, ExactVectors) {
  auto tm = perron_data(matrix_of("0->01;1->10"));
  EXPECT_TRUE(tm.exact);
  EXPECT_EQ(tm.integer_value, BigInt(2));
  EXPECT_EQ(tm.exact_vector, (std::vector<Rational>{Rational(1, 2), Rational(1, 2)}));
  auto ch = perron_data(matrix_of("1->1123;2->23;3->123"));
  EXPECT_EQ(ch.exact_vector, (std::vector<Rational>{Rational(1, 3), Rational(1, 3), Rational(1, 3)}));
  auto tp = perron_data(matrix_of("0->01;1->00"));
  EXPECT_EQ(tp.exact_vector, (std::vector<Rational>{Rational(2, 3), Rational(1, 3)}));
}

TEST(Perron, ExactVectorIsEigenvector) {
  for (auto spec : {"0->11;1->21;2->10", "0->010;1->102;2->201", "1->1123;2->23;3->123"}) {
    IntegerMatrix m = matrix_of(spec);
    auto pd = perron_data(m);
    ASSERT_TRUE(pd.exact);
    Rational total = 0;
    for (std::size_t i = 0; i < m.dim(); ++i) {
      Rational row = 0;
      for (std::size_t j = 0; j < m.dim(); ++j) row += Rational(m(i, j)) * pd.exact_vector[j];
      EXPECT_EQ(row, Rational(pd.integer_value) * pd.exact_vector[i]);
      EXPECT_GT(pd.exact_vector[i], 0);
      total += pd.exact_vector[i];
    }
    EXPECT_EQ(total, 1);
  }
}

TEST(Perron, IrrationalValueHasSmallResidual) {
  auto pd = perron_data(matrix_of("0->01;1->0"));
  EXPECT_FALSE(pd.exact);
  EXPECT_NEAR(pd.value, (1 + std::sqrt(5.0)) / 2, 1e-12);
  EXPECT_LT(pd.residual, 1e-12);
  EXPECT_NEAR(pd.vector[0], 2 / (1 + std::sqrt(5.0)), 1e-12);
}

TEST(Perron, NonPrimitiveRejected) { EXPECT_THROW(perron_data(matrix_of("0->00;1->11")), Error); }

TEST(PisotClassify, Examples) {
  EXPECT_EQ(pisot_classify(matrix_of("0->01;1->10")), PisotClass::Pisot);
  EXPECT_EQ(pisot_classify(matrix_of("0->01;1->0")), PisotClass::Pisot);
  Substitution tm = Substitution::parse("0->01;1->10");
  EXPECT_EQ(pisot_classify(substitution_matrix(two_block_substitution(tm).substitution)), PisotClass::RootOfUnityPresent);
  EXPECT_EQ(pisot_classify(matrix_of("1->121;2->32;3->321")), PisotClass::RootOfUnityPresent);
  EXPECT_EQ(pisot_classify(matrix_of("0->0001;1->0111")), PisotClass::SecondEigenvalueOutside);
}

TEST(PisotClassify, PerronDominatesOtherRoots) {
  for (auto spec : {"0->01;1->10", "1->1123;2->23;3->123", "0->0012;1->12;2->0", "1->121;2->32;3->321"}) {
    IntegerMatrix m = matrix_of(spec);
    Spectrum sp = spectrum(m);
    auto pd = perron_data(m, sp);
    for (std::size_t i = 0; i < sp.roots.size(); ++i)
      if (i != pd.root_index) EXPECT_LT(sp.roots[i].modulus_hi, pd.value_lo) << spec;
  }
}

TEST(ModularPeriod, Examples) {
  IntegerMatrix tp = matrix_of("0->01;1->00");
  auto mp = power_mod_period(tp, 3);
  std::vector<BigInt> e0{1, 0};
  for (std::size_t n = mp.preperiod; n < mp.preperiod + 4; ++n) {
    auto r = length_residue(mp, e0, n);
    EXPECT_NE(r, 0u);
    EXPECT_EQ(r, (1u << n) % 3);
  }
  auto id = power_mod_period(IntegerMatrix::identity(3), 5);
  EXPECT_EQ(id.preperiod, 0u);
  EXPECT_EQ(id.period, 1u);
  IntegerMatrix ch = matrix_of("1->1123;2->23;3->123");
  auto mc = power_mod_period(ch, 3);
  std::vector<BigInt> e1{1, 0, 0};
  for (std::size_t n = std::max<std::size_t>(1, mc.preperiod); n < mc.preperiod + mc.period + 1; ++n)
    EXPECT_EQ(length_residue(mc, e1, n), 1u);
  EXPECT_EQ(image_length(ch, AbelianVector{{1, 0, 0}}, 6), BigInt(1093));
}

TEST(ModularPeriod, MatchesExactPowers) {
  IntegerMatrix m = matrix_of("0->11;1->21;2->10");
  for (std::uint64_t q : {2, 3, 6, 7}) {
    auto mp = power_mod_period(m, q);
    for (std::size_t n = mp.preperiod; n < mp.preperiod + 2 * mp.period; ++n) {
      IntegerMatrix p = matrix_power(m, static_cast<unsigned>(n));
      const auto& r = mp.at(n);
      for (std::size_t i = 0; i < 9; ++i) EXPECT_EQ(BigInt(r[i]), BigInt(p(i / 3, i % 3) % q));
    }
  }
}

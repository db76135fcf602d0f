#include <gtest/gtest.h>

#include <cmath>

#include "yoshida/fixture/n17.hpp"
#include "yoshida/fixture/n17_forms.hpp"
#include "yoshida/siegelhecke.hpp"

using namespace yoshida;

namespace {

const fixture::N17& fx() {
  static const fixture::N17 f = fixture::load_n17();
  return f;
}

/// The fixture lift with enough range for T(5).
const FourierExpansionSiegel2& golden() {
  static const FourierExpansionSiegel2 f = fixture::lift_golden(fx(), 2900);
  return f;
}

Matrix symplectic_j() {
  Matrix j(4, 4);
  for (std::size_t i = 0; i < 2; ++i) {
    j(i, i + 2) = 1;
    j(i + 2, i) = -1;
  }
  return j;
}

bool is_integral(const Matrix& m) {
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t k = 0; k < m.cols(); ++k)
      if (!is_integer(m(i, k))) return false;
  return true;
}

UPoly power(const UPoly& f, int e) {
  UPoly out = UPoly::constant(1);
  for (int i = 0; i < e; ++i) out = out * f;
  return out;
}

// Brandt eigenvalues of the fixture forms: weight 4 (nu = 1) and weight 2 (nu = 0).
const std::map<long, std::pair<long, long>> kBrandt{{2, {-3, -1}}, {3, {-8, 0}}, {5, {6, -2}}};

}  // namespace

TEST(Cosets, CountsAreOnePlusPPlusPSquaredPlusPCubed) {
  for (long p : {2L, 3L, 5L}) EXPECT_EQ(hecke_cosets(p).size(), static_cast<std::size_t>(p * p * p + p * p + p + 1));
  EXPECT_EQ(hecke_cosets(2).size(), 15u);
  EXPECT_EQ(hecke_cosets(3).size(), 40u);
  EXPECT_THROW(hecke_cosets(4), UsageError);
}

TEST(Cosets, AreIntegralSymplecticSimilitudes) {
  const Matrix j = symplectic_j();
  for (long p : {2L, 3L}) {
    for (const auto& c : hecke_cosets(p)) {
      Matrix m = c.full();
      EXPECT_TRUE(is_integral(m));
      EXPECT_EQ(m.transpose() * j * m, Rational(p) * j);
      EXPECT_EQ(c.a * c.d.transpose(), Rational(p) * Matrix::identity(2));
      Matrix abt = c.a * c.b.transpose(), btd = c.b.transpose() * c.d;
      EXPECT_EQ(abt, abt.transpose());
      EXPECT_EQ(btd, btd.transpose());
    }
  }
}

TEST(Cosets, ArePairwiseInequivalent) {
  // M1 and M2 lie in the same left coset iff M1 M2^{-1} is integral
  for (long p : {2L, 3L}) {
    auto cs = hecke_cosets(p);
    for (std::size_t i = 0; i < cs.size(); ++i)
      for (std::size_t k = i + 1; k < cs.size(); ++k)
        EXPECT_FALSE(is_integral(cs[i].full() * inverse(cs[k].full()))) << "p " << p << " reps " << i << ", " << k;
  }
}

TEST(HeckeTp, FixtureEigenvalues) {
  const std::map<long, long> expected{{2, -5}, {3, -8}, {5, -4}};
  for (const auto& [p, lambda] : expected) {
    FourierExpansionSiegel2 g = hecke_Tp(golden(), p);
    EXPECT_EQ(g.bound, 2900 / (p * p));
    EXPECT_EQ(eigenvalue_extract(golden(), g), lambda) << "p " << p;
  }
}

TEST(HeckeTp, ZeroMapsToZero) {
  FourierExpansionSiegel2 z{3, 17, 200, {}};
  FourierExpansionSiegel2 g = hecke_Tp(z, 3);
  EXPECT_TRUE(g.is_zero());
  EXPECT_EQ(g.bound, 22);
}

TEST(HeckeTp, RefusesShortInputAndBadPrimes) {
  FourierExpansionSiegel2 f = fixture::lift_golden(fx(), 40);
  try {
    hecke_Tp(f, 5);
    FAIL() << "short input accepted";
  } catch (const TruncationError& e) {
    EXPECT_NE(std::string(e.what()).find("too small"), std::string::npos) << e.what();
  }
  EXPECT_THROW(hecke_Tp(f, 17), UsageError);
  EXPECT_THROW(hecke_Tp(f, 9), UsageError);
}

TEST(HeckeTp, OperatorsCommute) {
  FourierExpansionSiegel2 a = hecke_Tp(hecke_Tp(golden(), 2), 3);
  FourierExpansionSiegel2 b = hecke_Tp(hecke_Tp(golden(), 3), 2);
  EXPECT_EQ(a.bound, 80);
  EXPECT_EQ(b.bound, 80);
  EXPECT_EQ(a, b);
  EXPECT_EQ(eigenvalue_extract(golden(), a), 40);
}

TEST(HeckeTp, AmbiguousSupportMapsToZero) {
  FourierExpansionSiegel2 f{3, 17, 400, {}};
  long filled = 0;
  for (const auto& t : covered_forms(400)) {
    if (t.b == 0 || t.a == t.b || t.a == t.c) {
      f.set(t, Rational(t.a + 2 * t.c - t.b));
      ++filled;
    }
  }
  ASSERT_GT(filled, 10);
  for (long p : {2L, 3L}) EXPECT_TRUE(hecke_Tp(f, p).is_zero()) << "p " << p;
}

TEST(HeckeTp, ThreadCountDoesNotChangeTheImage) {
  set_thread_count(1);
  FourierExpansionSiegel2 a = hecke_Tp(golden(), 3);
  set_thread_count(4);
  FourierExpansionSiegel2 b = hecke_Tp(golden(), 3);
  set_thread_count(0);
  EXPECT_EQ(a, b);
}

TEST(EigenvalueExtract, ScaleInvarianceAndDegenerateCases) {
  FourierExpansionSiegel2 f = fixture::lift_golden(fx(), 120);
  FourierExpansionSiegel2 g = Rational(-5) * f;
  EXPECT_EQ(eigenvalue_extract(f, g), -5);
  EXPECT_EQ(eigenvalue_extract(Rational(7) * f, Rational(7) * g), -5);
  EXPECT_EQ(eigenvalue_extract(f, Rational(0) * f), 0);

  FourierExpansionSiegel2 bent = g;
  bent.set({2, 1, 3}, bent({2, 1, 3}) + 1);
  EXPECT_THROW(eigenvalue_extract(f, bent), NotEigenformError);
  FourierExpansionSiegel2 z{3, 17, 120, {}};
  EXPECT_THROW(eigenvalue_extract(z, z), DegenerateError);
}

TEST(Spinor, LiftEigenvalueIsBuiltFromTheBrandtEigenvalues) {
  // ell - 1 = k1 - k2 divided by two
  const std::map<long, long> lift{{2, -5}, {3, -8}, {5, -4}};
  for (const auto& [p, ev] : kBrandt) EXPECT_EQ(ev.first + p * ev.second, lift.at(p)) << "p " << p;
  // the fixture forms themselves give those Brandt eigenvalues
  auto ff = fixture::forms(fx());
  for (const auto& [p, ev] : kBrandt) {
    EXPECT_EQ(eigenvalue_of(brandt_matrix(ff.fs1, p).full(), ff.fs1, ff.phi1), std::optional<Rational>(ev.first));
    EXPECT_EQ(eigenvalue_of(brandt_matrix(ff.fs0, p).full(), ff.fs0, ff.phi2), std::optional<Rational>(ev.second));
  }
}

TEST(StandardFactor, TrivialParametersGiveFifthPowerOfOneMinusX) {
  const UPoly one_minus_x(Vec{1, -1});
  for (long p : {2L, 3L, 5L}) {
    // beta + 1/beta = 2 in two weights of even sum
    SatakePair b{1, 2, p}, bt{3, 2 * p, p};
    EXPECT_EQ(b.sum_squared(), 4);
    EXPECT_EQ(bt.sum_squared(), 4);
    EXPECT_EQ(standard_L_local(b, bt, 2, p).poly, power(one_minus_x, 5));
    UPoly extra = UPoly(Vec{1, -p}) * UPoly(Vec{1, -make_rational(1, p)});
    EXPECT_EQ(standard_L_local(b, bt, 3, p).poly, power(one_minus_x, 5) * extra);
    EXPECT_EQ(standard_L_local(b, bt, 4, p).poly.degree(), 9);
  }
  EXPECT_THROW(standard_L_local(SatakePair{1, 2, 2}, SatakePair{1, 2, 3}, 2, 2), UsageError);
  EXPECT_THROW(standard_L_local(SatakePair{1, 2, 2}, SatakePair{1, 2, 2}, 0, 2), UsageError);
}

TEST(StandardFactor, FixtureAtTwo) {
  SatakePair b{4, -3, 2}, bt{2, -1, 2};
  LocalFactor f = standard_L_local(b, bt, 2, 2);
  UPoly expected(Vec{1, make_rational(-7, 4), make_rational(3, 8), make_rational(-3, 8), make_rational(7, 4), -1});
  EXPECT_EQ(f.poly, expected);
  EXPECT_EQ(f.poly.coeff(0), 1);
  EXPECT_EQ(f.poly.degree(), 5);
}

TEST(StandardFactor, IsZetaTimesShiftedRankinSelberg) {
  for (const auto& [p, ev] : kBrandt) {
    SatakePair b{4, ev.first, p}, bt{2, ev.second, p};
    UPoly rs = rankin_selberg_local(ev.first, ev.second, 4, 2, p).poly;
    // arithmetic X = p^{-s} becomes p^{-(s + 2)} after the shift by (k1 + k2)/2 - 1
    UPoly shifted = UPoly(Vec{1, -1}) * rs.scale_variable(make_rational(1, p * p));
    EXPECT_EQ(standard_L_local(b, bt, 2, p).poly, shifted) << "p " << p;
  }
}

TEST(StandardFactor, ValueAtOneIsFiniteAndNonzero) {
  for (const auto& [p, ev] : kBrandt) {
    SatakePair b{4, ev.first, p}, bt{2, ev.second, p};
    double v = standard_L_local(b, bt, 2, p).value_at(1.0);
    EXPECT_TRUE(std::isfinite(v));
    EXPECT_NE(v, 0.0);
  }
  // the trivial factor has a pole at s = 0
  EXPECT_THROW(standard_L_local(SatakePair{1, 2, 2}, SatakePair{1, 2, 2}, 2, 2).value_at(0.0), DegenerateError);
}

TEST(RankinSelberg, VanishingEigenvalues) {
  for (long p : {2L, 3L, 5L}) {
    for (auto [k1, k2] : {std::pair<long, long>{4, 2}, {2, 2}, {6, 4}}) {
      Rational q = pow_int(Rational(p), k1 + k2 - 2);
      EXPECT_EQ(rankin_selberg_local(0, 0, k1, k2, p).poly, UPoly(Vec{1, 0, -2 * q, 0, q * q}));
    }
  }
}

TEST(RankinSelberg, FixtureFactorAtTwo) {
  EXPECT_EQ(rankin_selberg_local(-3, -1, 4, 2, 2).poly, UPoly(Vec{1, -3, -6, -48, 256}));
}

TEST(RankinSelberg, MatchesTheDirichletSeriesToDegreeSix) {
  for (const auto& [p, ev] : kBrandt) {
    Rational q = pow_int(Rational(p), 4);
    EXPECT_EQ(rankin_selberg_check(ev.first, ev.second, 4, 2, p, 6), UPoly(Vec{1, 0, -q})) << "p " << p;
  }
  // arbitrary integers work as well, the identity is formal
  EXPECT_EQ(rankin_selberg_check(7, -11, 6, 4, 3, 6), UPoly(Vec{1, 0, -pow_int(Rational(3), 8)}));
}

TEST(RankinSelberg, PrimePowerCoefficients) {
  auto a = prime_power_coefficients(-3, 4, 2, 3);
  ASSERT_EQ(a.size(), 4u);
  EXPECT_EQ(a[0], 1);
  EXPECT_EQ(a[1], -3);
  EXPECT_EQ(a[2], 9 - 8);
  EXPECT_EQ(a[3], -3 * 1 - 8 * -3);
}

TEST(LambdaN, EmptyProductAtLevelOne) {
  for (int n : {1, 2, 3}) {
    LambdaValue v = lambda_N(1, n, 1.0);
    EXPECT_FALSE(v.pole);
    EXPECT_EQ(v.value, 1.0);
  }
}

TEST(LambdaN, FixtureDegreeTwo) {
  LambdaValue v = lambda_N(17, 2, 1.0);
  ASSERT_FALSE(v.pole);
  EXPECT_NEAR(v.value, (289.0 / 288.0) * (17.0 / 16.0), 1e-12);
  EXPECT_NEAR(v.value, 1.066189236111111, 1e-12);
}

TEST(LambdaN, FixtureDegreeThreeHasAPole) {
  LambdaValue v = lambda_N(17, 3, 1.0);
  EXPECT_TRUE(v.pole);
  EXPECT_EQ(v.pole_prime, 17);
  EXPECT_EQ(v.pole_j, 3);
  EXPECT_FALSE(lambda_N(17, 3, 1.5).pole);
}

TEST(LambdaN, NonessentialPrimeReplacesTheFirstTwoFactors) {
  // level 34 with 2 non-essential: eps = -1, alpha + 1/alpha = 5/2
  const double s = 1.0;
  const double x = std::pow(2.0, (-2 * s - 1) / 2);
  double expected = 1.0 / (1 - 2.5 * x + x * x);
  for (int j = 1; j <= 2; ++j) expected /= 1 - std::pow(17.0, -s - 2 + j);
  LambdaValue v = lambda_N(34, 2, s, {{2, -1, 2.5}});
  ASSERT_FALSE(v.pole);
  EXPECT_NEAR(v.value, expected, 1e-12);
  // at degree 3 the 2-part gains 1 - 2^{-s+1}, which vanishes at s = 1
  LambdaValue w = lambda_N(34, 3, s, {{2, -1, 2.5}});
  EXPECT_TRUE(w.pole);
  EXPECT_EQ(w.pole_prime, 2);
  EXPECT_EQ(w.pole_j, 3);
}

TEST(LambdaN, RejectsBadArguments) {
  EXPECT_THROW(lambda_N(0, 2, 1.0), UsageError);
  EXPECT_THROW(lambda_N(17, 0, 1.0), UsageError);
  EXPECT_THROW(lambda_N(18, 2, 1.0), UsageError);
}

#include <gtest/gtest.h>

#include <random>
#include <set>

#include "yoshida/fixture/n17_forms.hpp"
#include "yoshida/io/expansion.hpp"
#include "yoshida/lift.hpp"

using namespace yoshida;

namespace {

const fixture::N17& fx() {
  static const fixture::N17 f = fixture::load_n17();
  return f;
}

const fixture::N17Forms& forms() {
  static const fixture::N17Forms f = fixture::forms(fx());
  return f;
}

const FourierExpansionSiegel2& golden120() {
  static const FourierExpansionSiegel2 f = fixture::lift_golden(fx(), 120);
  return f;
}

/// T[U] = U^t T U.
BinaryForm transform(const BinaryForm& t, long p, long q, long r, long s) {
  return {t.a * p * p + t.b * p * r + t.c * r * r, 2 * t.a * p * q + t.b * (p * s + q * r) + 2 * t.c * r * s,
          t.a * q * q + t.b * q * s + t.c * s * s};
}

struct Unimodular {
  long p, q, r, s;
  long det() const { return p * s - q * r; }
};

Unimodular random_unimodular(std::mt19937& rng) {
  std::uniform_int_distribution<int> pick(0, 3), k(-2, 2);
  Unimodular u{1, 0, 0, 1};
  for (int step = 0; step < 4; ++step) {
    long m = k(rng);
    switch (pick(rng)) {
      case 0: u = {u.p, u.q + m * u.p, u.r, u.s + m * u.r}; break;  // column op
      case 1: u = {u.p + m * u.q, u.q, u.r + m * u.s, u.s}; break;
      case 2: u = {u.q, u.p, u.s, u.r}; break;                      // swap columns
      default: u = {-u.p, u.q, -u.r, u.s}; break;                   // negate a column
    }
  }
  return u;
}

}  // namespace

TEST(ReduceForm, Examples) {
  auto r = reduce_form({3, 5, 4});
  EXPECT_EQ(r.form, (BinaryForm{2, 1, 3}));
  EXPECT_EQ(r.form.disc(), 23);
  EXPECT_EQ(reduce_form({1, 0, 1}).form, (BinaryForm{1, 0, 1}));
  EXPECT_EQ(reduce_form({5, 0, 2}).form, (BinaryForm{2, 0, 5}));
  EXPECT_EQ(reduce_form({5, 0, 2}).sign, -1);
  EXPECT_EQ(reduce_form({4, 4, 1}).form, (BinaryForm{0, 0, 1}));
  EXPECT_THROW(reduce_form({1, 3, 1}), UsageError);
  EXPECT_THROW(reduce_form({-1, 0, -1}), UsageError);
}

TEST(ReduceForm, SingularFormsEndOnTheAxis) {
  // x^2 + 2xy + y^2 = (x + y)^2
  EXPECT_EQ(reduce_form({1, 2, 1}).form, (BinaryForm{0, 0, 1}));
  EXPECT_EQ(reduce_form({4, 12, 9}).form, (BinaryForm{0, 0, 1}));
  EXPECT_EQ(reduce_form({0, 0, 3}).form, (BinaryForm{0, 0, 3}));
}

TEST(ReduceForm, RecoversTheClassAndTheSignOfU) {
  std::mt19937 rng(11);
  for (const auto& t : covered_forms(60)) {
    if (t.singular()) continue;
    for (int trial = 0; trial < 5; ++trial) {
      Unimodular u = random_unimodular(rng);
      auto r = reduce_form(transform(t, u.p, u.q, u.r, u.s));
      ASSERT_EQ(r.form, t) << "from " << t.to_string();
      if (!t.ambiguous()) {
        EXPECT_EQ(r.sign, u.det()) << t.to_string();
      }
    }
  }
}

TEST(Coverage, CoveredFormsAreReducedSortedAndComplete) {
  auto all = covered_forms(40);
  EXPECT_TRUE(std::is_sorted(all.begin(), all.end()));
  std::size_t definite = 0;
  for (const auto& t : all) {
    EXPECT_TRUE(is_reduced(t));
    EXPECT_TRUE(in_coverage(t, 40));
    definite += !t.singular();
  }
  std::size_t brute = 0;
  for (long a = 1; a <= 40; ++a)
    for (long b = 0; b <= a; ++b)
      for (long c = a; c <= 40; ++c)
        if (4 * a * c - b * b <= 40) ++brute;
  EXPECT_EQ(definite, brute);
  EXPECT_EQ(all.size() - definite, 11u);  // [0,0,c] for c <= 10
}

TEST(Expansion, OutOfRangeAccessIsATruncationError) {
  const auto& f = golden120();
  EXPECT_THROW(f({6, 1, 6}), TruncationError);
  EXPECT_THROW(f({0, 0, 31}), TruncationError);
  EXPECT_NO_THROW(f({0, 0, 30}));
  EXPECT_THROW(f({1, 3, 1}), UsageError);
}

TEST(Lift, GoldenCoefficients) {
  const auto& f = golden120();
  ASSERT_EQ(fx().coefficients.size(), 13u);
  for (const auto& c : fx().coefficients) EXPECT_EQ(f({c.a, c.b, c.c}), c.value) << BinaryForm{c.a, c.b, c.c}.to_string();
  EXPECT_EQ(f({2, 1, 3}), 32);
  EXPECT_EQ(f({4, 2, 6}), -96);
}

TEST(Lift, EveryOtherCoefficientInTheBoxVanishes) {
  const auto& f = golden120();
  std::set<BinaryForm> listed;
  for (const auto& c : fx().coefficients) listed.insert({c.a, c.b, c.c});
  for (long a = 1; a <= fx().coefficient_a_max; ++a)
    for (long b = 0; b <= a; ++b)
      for (long c = a; c <= fx().coefficient_c_max; ++c) {
        BinaryForm t{a, b, c};
        if (t.singular() || listed.count(t)) continue;
        EXPECT_EQ(f(t), 0) << t.to_string();
      }
}

TEST(Lift, TermsAddUpAtTheFirstCoefficient) {
  BinaryForm t{2, 1, 3};
  Rational r1 = theta2_coefficient(fx().r1.gram(), bilinear_poly(fx().p1), t);
  Rational i12 = theta2_coefficient(fx().i12.gram(), bilinear_poly(fx().p12), t);
  EXPECT_EQ(r1 + i12, 32);
}

TEST(Lift, CoefficientsTransformWithTheDeterminant) {
  std::mt19937 rng(12);
  Poly p = bilinear_poly(fx().p1);
  for (const BinaryForm& t : {BinaryForm{2, 1, 3}, BinaryForm{3, 2, 4}, BinaryForm{2, 1, 4}}) {
    Rational base = theta2_coefficient(fx().r1.gram(), p, t);
    for (int trial = 0; trial < 3; ++trial) {
      Unimodular u = random_unimodular(rng);
      EXPECT_EQ(theta2_coefficient(fx().r1.gram(), p, transform(t, u.p, u.q, u.r, u.s)), u.det() * base);
      EXPECT_EQ(golden120()(transform(t, u.p, u.q, u.r, u.s)), u.det() * golden120()(t));
    }
  }
}

TEST(Lift, IsCuspidalAndVanishesOnAmbiguousForms) {
  const auto& f = golden120();
  EXPECT_TRUE(is_cuspidal(f));
  EXPECT_TRUE(phi_operator(f).is_zero());
  for (const auto& t : covered_forms(100))
    if (t.ambiguous()) {
      EXPECT_EQ(f.entries.count(t), 0u) << t.to_string();
    }
}

TEST(Lift, TheoryPathIsProportionalToGolden) {
  const auto& ff = forms();
  auto y = yoshida2(ff.fs1, ff.phi1, ff.fs0, ff.phi2, 120);
  EXPECT_EQ(y.weight, 3);
  EXPECT_EQ(y.level, 17);
  ASSERT_FALSE(y.is_zero());
  EXPECT_EQ(8 * y, golden120());
}

TEST(Lift, IsLinearInTheSecondForm) {
  const auto& ff = forms();
  AutomorphicForm one = ff.fs0.constant_one();
  auto a = yoshida2(ff.fs1, ff.phi1, ff.fs0, ff.phi2, 60);
  auto b = yoshida2(ff.fs1, ff.phi1, ff.fs0, one, 60);
  auto c = yoshida2(ff.fs1, ff.phi1, ff.fs0, Rational(3) * ff.phi2 + Rational(-2) * one, 60);
  EXPECT_EQ(c, Rational(3) * a + Rational(-2) * b);
  // phi1 and the constant form have different eigenvalues, so the lift is zero
  EXPECT_TRUE(b.is_zero());
}

TEST(Lift, ThreadCountDoesNotChangeTheExpansion) {
  set_thread_count(1);
  auto a = fixture::lift_golden(fx(), 80);
  set_thread_count(4);
  auto b = fixture::lift_golden(fx(), 80);
  set_thread_count(0);
  EXPECT_EQ(a, b);
  EXPECT_EQ(io::dump(io::expansion_json(a)), io::dump(io::expansion_json(b)));
}

TEST(Lift, WeightTwoLiftOfConstantsIsNotCuspidal) {
  const auto& ff = forms();
  AutomorphicForm one = ff.fs0.constant_one();
  auto y = yoshida2(ff.fs0, one, ff.fs0, one, 24);
  EXPECT_EQ(y.weight, 2);
  auto q = phi_operator(y);
  EXPECT_EQ(q[0], ff.cs.mass() * ff.cs.mass());
  EXPECT_FALSE(is_cuspidal(y));
}

TEST(EllipticLift, CuspFormOfWeightTwo) {
  const auto& ff = forms();
  QExpansion q = yoshida1(ff.fs0, ff.phi2, ff.phi2, 12);
  EXPECT_EQ(q.weight, 2);
  EXPECT_EQ(q[0], 0);
  ASSERT_NE(q[1], 0);
  // Brandt eigenvalues of phi2 are the normalised coefficients
  EXPECT_EQ(q[2] / q[1], -1);
  EXPECT_EQ(q[3] / q[1], 0);
  EXPECT_EQ(q[5] / q[1], -2);
  EXPECT_EQ(q[4] / q[1], q[2] * q[2] / (q[1] * q[1]) - 2);
  EXPECT_THROW(q[13], TruncationError);
}

TEST(EllipticLift, DistinctEigenformsGiveZero) {
  const auto& ff = forms();
  EXPECT_TRUE(yoshida1(ff.fs0, ff.phi2, ff.fs0.constant_one(), 12).is_zero());
}

TEST(EllipticLift, EisensteinSeriesFromTheConstantForm) {
  const auto& ff = forms();
  AutomorphicForm one = ff.fs0.constant_one();
  QExpansion q = yoshida1(ff.fs0, one, one, 12);
  EXPECT_EQ(q[0], ff.cs.mass() * ff.cs.mass());
  for (long m = 1; m <= 12; ++m) EXPECT_GT(q[m], 0) << m;
}

TEST(EllipticLift, WeightFourFromTheHarmonicForm) {
  const auto& ff = forms();
  QExpansion q = yoshida1(ff.fs1, ff.phi1, ff.phi1, 6);
  EXPECT_EQ(q.weight, 4);
  EXPECT_EQ(q[0], 0);
  ASSERT_NE(q[1], 0);
  EXPECT_EQ(q[2] / q[1], -3);
  EXPECT_EQ(q[3] / q[1], -8);
  EXPECT_EQ(q[5] / q[1], 6);
}

TEST(Theta, NormFormsOfTheTwoOrdersDiffer) {
  Poly one = Poly::constant(4, 1);
  auto t1 = theta1_series(fx().r1.gram(), one, 20);
  auto t2 = theta1_series(fx().r2.gram(), one, 20);
  EXPECT_EQ(t1[0], 1);
  EXPECT_EQ(t1[1], fx().r1.unit_count);
  EXPECT_EQ(t2[1], fx().r2.unit_count);
  EXPECT_NE(t1, t2);
}

TEST(Json, ExpansionRoundTrip) {
  const auto& f = golden120();
  std::string text = io::dump(io::expansion_json(f));
  auto back = io::expansion_from(io::parse(text, "mem"));
  EXPECT_EQ(back, f);
  EXPECT_EQ(io::dump(io::expansion_json(back)), text);
}

TEST(Json, CanonicalisesValuesAndRejectsBadEntries) {
  auto parse = [](const std::string& s) { return io::expansion_from(io::parse(s, "mem")); };
  auto f = parse(R"({"weight": 3, "level": 17, "bound": 40, "entries": [[2, 1, 3, "-96/1"], [1, 0, 1, "0"]]})");
  EXPECT_EQ(io::expansion_json(f)["entries"][0][3], "-96");
  EXPECT_EQ(f.entries.size(), 1u);
  EXPECT_THROW(parse(R"({"weight": 3, "level": 17, "bound": 40, "entries": [[3, 5, 4, "1"]]})"), FormatError);
  EXPECT_THROW(parse(R"({"weight": 3, "level": 17, "bound": 20, "entries": [[2, 1, 3, "1"]]})"), FormatError);
  EXPECT_THROW(parse(R"({"weight": 3, "level": 17, "bound": 40, "entries": [[2, 1, 3, "1"], [2, 1, 3, "2"]]})"),
               FormatError);
  EXPECT_THROW(parse(R"({"weight": 3, "level": 17, "entries": []})"), FormatError);
  EXPECT_THROW(parse(R"({"weight": 3, "level": 17, "bound": 40, "entries": [[2, 1, 3, "1/0"]]})"), FormatError);
  EXPECT_THROW(parse(R"({"weight": 3, "level": 17, "bound": 40, "entries": [)"), FormatError);
}

TEST(ReduceForm, NegativeMiddleCoefficient) {
  auto r = reduce_form({3, -1, 2});
  EXPECT_EQ(r.form, (BinaryForm{2, 1, 3}));
  EXPECT_EQ(r.form.disc(), 23);
}

TEST(Lift, ZeroExpansionHasZeroBoundaryValue) {
  FourierExpansionSiegel2 z{4, 17, 50, {}};
  EXPECT_TRUE(phi_operator(z).is_zero());
  EXPECT_TRUE(is_cuspidal(z));
  EXPECT_EQ(z({2, 1, 3}), 0);
}

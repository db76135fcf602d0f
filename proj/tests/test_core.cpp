#include <gtest/gtest.h>

#include <random>

#include "yoshida/core/matrix.hpp"
#include "yoshida/core/modp.hpp"
#include "yoshida/core/parallel.hpp"
#include "yoshida/core/polynomial.hpp"
#include "yoshida/core/rational.hpp"
#include "yoshida/core/upoly.hpp"

using namespace yoshida;

TEST(Rational, CanonicalText) {
  EXPECT_EQ(to_string(parse_rational("-96/1")), "-96");
  EXPECT_EQ(to_string(parse_rational("\xE2\x88\x92" "96")), "-96");
  EXPECT_EQ(to_string(parse_rational("-6/4")), "-3/2");
  EXPECT_THROW(parse_rational("6/-4"), FormatError);
}

TEST(Rational, MalformedInputIsRejected) {
  EXPECT_THROW(parse_rational("1/0"), FormatError);
  EXPECT_THROW(parse_rational("abc"), FormatError);
  EXPECT_THROW(parse_rational("1/"), FormatError);
  EXPECT_THROW(parse_rational(""), FormatError);
}

TEST(Rational, Roots) {
  EXPECT_EQ(exact_root(Rational(83521), 4), 17);
  EXPECT_EQ(exact_root(make_rational(1, 16), 4), make_rational(1, 2));
  EXPECT_THROW(exact_root(Rational(2), 2), UsageError);
  EXPECT_EQ(floor_sqrt(Rational(24)), 4);
  EXPECT_EQ(pow_int(Rational(2), -3), make_rational(1, 8));
}

TEST(Matrix, DeterminantInverseSolve) {
  Matrix a = Matrix::from_rows({{2, 1, 1, 0}, {1, 4, -1, 1}, {1, -1, 6, 2}, {0, 1, 2, 10}});
  EXPECT_EQ(det(a), 289);
  EXPECT_EQ(a * inverse(a), Matrix::identity(4));
  Matrix b = Matrix::from_rows({{1}, {2}, {3}, {4}});
  EXPECT_EQ(a * solve(a, b), b);
}

TEST(Matrix, NullspaceAndRank) {
  Matrix a = Matrix::from_rows({{1, 2, 3}, {2, 4, 6}, {1, 0, 1}});
  EXPECT_EQ(rank(a), 2u);
  auto k = nullspace(a);
  ASSERT_EQ(k.size(), 1u);
  Vec zero = a * k[0];
  for (const auto& v : zero) EXPECT_EQ(v, 0);
}

TEST(Matrix, CharpolyAnnihilates) {
  Matrix a = Matrix::from_rows({{1, 2, 0}, {0, 3, 1}, {4, 0, -1}});
  UPoly f = charpoly_upoly(a);
  EXPECT_EQ(f.degree(), 3);
  EXPECT_TRUE(f.evaluate(a).is_zero());
  EXPECT_EQ(f.coeff(0), -det(a));
}

TEST(Matrix, ZSpanBasisOfRedundantGenerators) {
  auto b = z_span_basis({{2, 0}, {0, 2}, {1, 1}});
  ASSERT_EQ(b.size(), 2u);
  EXPECT_EQ(abs(det(Matrix::from_rows(b))), 2);
}

TEST(Polynomial, LaplacianOfHarmonicAndNonHarmonic) {
  Poly x = Poly::variable(2, 0), y = Poly::variable(2, 1);
  Poly h = x * x - y * y;
  EXPECT_TRUE(h.laplacian(Matrix::identity(2)).is_zero());
  Poly r = x * x + y * y;
  EXPECT_EQ(r.laplacian(Matrix::identity(2)), Poly::constant(2, 4));
}

TEST(Polynomial, ComposeAndEvaluate) {
  Poly x = Poly::variable(2, 0), y = Poly::variable(2, 1);
  Poly p = x * x * y + Poly::constant(2, 3);
  Poly q = p.compose({x + y, x - y});
  EXPECT_EQ(q.evaluate({2, 1}), p.evaluate({3, 1}));
  EXPECT_EQ(monomials(3, 2).size(), 6u);
}

TEST(UPoly, FactorsWithMultiplicity) {
  UPoly f = UPoly(Vec{-2, 0, 1}) * UPoly(Vec{1, 1}) * UPoly(Vec{1, 1}) * UPoly(Vec{1, 1});
  auto fac = factor(f);
  ASSERT_EQ(fac.size(), 2u);
  EXPECT_EQ(fac[0].first, UPoly(Vec{1, 1}));
  EXPECT_EQ(fac[0].second, 3);
  EXPECT_EQ(fac[1].first, UPoly(Vec{-2, 0, 1}));
  EXPECT_EQ(fac[1].second, 1);
}

TEST(UPoly, IrreducibleQuarticStaysWhole) {
  // x^4 + 1 splits modulo every prime, so recombination must rebuild it
  auto fac = factor(UPoly(Vec{1, 0, 0, 0, 1}));
  ASSERT_EQ(fac.size(), 1u);
  EXPECT_EQ(fac[0].first.degree(), 4);
}

TEST(UPoly, RationalRootsAndCubic) {
  // (2x - 1)(3x + 2)(x^3 - 2)
  UPoly f = UPoly(Vec{-1, 2}) * UPoly(Vec{2, 3}) * UPoly(Vec{-2, 0, 0, 1});
  auto fac = factor(f);
  ASSERT_EQ(fac.size(), 3u);
  UPoly prod = UPoly::constant(1);
  for (const auto& [g, m] : fac) {
    EXPECT_EQ(m, 1);
    prod = prod * g;
  }
  EXPECT_EQ(prod, f.monic());
}

TEST(UPoly, RandomProductsRefactor) {
  std::mt19937 rng(7);
  std::uniform_int_distribution<int> coef(-5, 5);
  for (int trial = 0; trial < 20; ++trial) {
    UPoly a(Vec{coef(rng), coef(rng), 1}), b(Vec{coef(rng), coef(rng), coef(rng), 1});
    UPoly f = a * b;
    UPoly prod = UPoly::constant(1);
    for (const auto& [g, m] : factor(f)) {
      for (int k = 0; k < m; ++k) prod = prod * g;
      EXPECT_EQ(factor(g).size(), 1u);
    }
    EXPECT_EQ(prod, f.monic());
  }
}

TEST(ModP, SubspaceCountsAreGaussianBinomials) {
  // [4 choose 2]_p = (p^2 + 1)(p^2 + p + 1), [4 choose 1]_p = p^3 + p^2 + p + 1
  for (long p : {2L, 3L}) {
    EXPECT_EQ(static_cast<long>(modp::subspaces(4, 2, p).size()), (p * p + 1) * (p * p + p + 1));
    EXPECT_EQ(static_cast<long>(modp::subspaces(4, 1, p).size()), p * p * p + p * p + p + 1);
  }
}

TEST(Parallel, ResultsIndependentOfThreadCount) {
  auto run = [](int threads) {
    set_thread_count(threads);
    return parallel_map(1000, [](std::size_t i) { return static_cast<long>(i * i % 97); });
  };
  auto one = run(1), four = run(4);
  set_thread_count(0);
  EXPECT_EQ(one, four);
}

TEST(Parallel, ExceptionsPropagate) {
  set_thread_count(3);
  EXPECT_THROW(parallel_map(50,
                            [](std::size_t i) {
                              if (i == 17) throw UsageError("boom");
                              return 0;
                            }),
               UsageError);
  set_thread_count(0);
}

#pragma once

#include <cmath>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "yoshida/core/error.hpp"
#include "yoshida/core/matrix.hpp"
#include "yoshida/core/parallel.hpp"
#include "yoshida/core/rational.hpp"
#include "yoshida/core/upoly.hpp"
#include "yoshida/lift.hpp"

namespace yoshida {

/// [[A, B], [0, D]] with A D^t = p I; acts on Fourier expansions through Z -> (AZ + B) D^{-1}.
struct HeckeCosetRep {
  Matrix a, b, d;

  Matrix full() const {
    Matrix m(4, 4);
    for (std::size_t i = 0; i < 2; ++i)
      for (std::size_t j = 0; j < 2; ++j) {
        m(i, j) = a(i, j);
        m(i, j + 2) = b(i, j);
        m(i + 2, j + 2) = d(i, j);
      }
    return m;
  }
};

namespace detail {
inline Matrix m2(long a, long b, long c, long d) { return Matrix::from_rows({{a, b}, {c, d}}); }
}  // namespace detail

/// p^3 + p^2 + p + 1 representatives of Gamma \ Gamma diag(1, 1, p, p) Gamma.
/// B is S D for S running over symmetric matrices in (1/p) Sym mod Sym with S D integral.
inline std::vector<HeckeCosetRep> hecke_cosets(long p) {
  if (!is_prime(p)) throw UsageError("hecke_cosets: p must be prime");
  std::vector<Matrix> ds{detail::m2(p, 0, 0, p), detail::m2(1, 0, 0, 1), detail::m2(p, 0, 0, 1)};
  for (long j = 0; j < p; ++j) ds.push_back(detail::m2(1, j, 0, p));
  std::vector<HeckeCosetRep> out;
  for (const auto& d : ds) {
    Matrix a = Rational(p) * inverse(d).transpose();
    for (long x = 0; x < p; ++x)
      for (long y = 0; y < p; ++y)
        for (long z = 0; z < p; ++z) {
          Matrix s = Matrix::from_rows({{make_rational(x, p), make_rational(y, p)}, {make_rational(y, p), make_rational(z, p)}});
          Matrix b = s * d;
          bool integral = true;
          for (std::size_t i = 0; i < 2; ++i)
            for (std::size_t k = 0; k < 2; ++k) integral = integral && is_integer(b(i, k));
          if (integral) out.push_back({a, b, d});
        }
  }
  return out;
}

/// T(p) on a scalar weight-k expansion, normalised so that a(pT) enters with coefficient 1:
/// b(T') = p^{2k-3} sum over cosets det(D)^{-k} e(tr(T B D^{-1})) a(T), T = D T' D^t / p.
/// The output bound is floor(bound / p^2).
inline FourierExpansionSiegel2 hecke_Tp(const FourierExpansionSiegel2& f, long p) {
  if (!is_prime(p)) throw UsageError("hecke_Tp: p must be prime");
  if (f.level % p == 0) throw UsageError("hecke_Tp: p = " + std::to_string(p) + " divides the level");
  const long out_bound = f.bound / (p * p);
  if (out_bound < 3)
    throw TruncationError("hecke_Tp: input bound " + std::to_string(f.bound) + " is too small for p = " +
                          std::to_string(p) + " (need at least " + std::to_string(3 * p * p) + ")");
  const long k = f.weight;
  const auto cosets = hecke_cosets(p);
  // cosets grouped by D in construction order
  std::vector<std::pair<Matrix, std::vector<Matrix>>> groups;
  for (const auto& c : cosets) {
    if (groups.empty() || !(groups.back().first == c.d)) groups.push_back({c.d, {}});
    groups.back().second.push_back(c.b * inverse(c.d));
  }
  const auto targets = covered_forms(out_bound);
  const Rational norm = pow_int(Rational(p), 2 * k - 3);
  auto values = parallel_map(targets.size(), [&](std::size_t idx) {
    const BinaryForm& t = targets[idx];
    Matrix tm = Matrix::from_rows({{Rational(t.a), make_rational(t.b, 2)}, {make_rational(t.b, 2), Rational(t.c)}});
    Rational total = 0;
    for (const auto& [d, svec] : groups) {
      Matrix big = (1 / Rational(p)) * (d * tm * d.transpose());
      Rational a = big(0, 0), b = 2 * big(0, 1), c = big(1, 1);
      if (!is_integer(a) || !is_integer(b) || !is_integer(c)) continue;
      // exact character sum: residues r of p tr(T S) mod p, sum_r n_r e(r/p)
      std::vector<long> counts(static_cast<std::size_t>(p), 0);
      for (const auto& s : svec) {
        Rational ph = Rational(p) * (big * s).trace();
        if (!is_integer(ph)) throw Error("hecke_Tp: phase outside (1/p)Z");
        ++counts[static_cast<std::size_t>(mod_floor(to_long(ph), p))];
      }
      for (long r = 2; r < p; ++r)
        if (counts[r] != counts[1]) throw Error("hecke_Tp: character sum is not rational");
      const long csum = counts[0] - (p > 1 ? counts[1] : 0);
      if (csum == 0) continue;
      Rational coeff = f({to_long(a), to_long(b), to_long(c)});
      if (coeff == 0) continue;
      total += Rational(csum) * coeff / pow_int(det(d), k);
    }
    return Rational(norm * total);
  });
  FourierExpansionSiegel2 out{f.weight, f.level, out_bound, {}};
  for (std::size_t i = 0; i < targets.size(); ++i)
    if (values[i] != 0) out.entries.emplace(targets[i], values[i]);
  return out;
}

/// The unique lambda with g = lambda f on the common range of the two expansions.
inline Rational eigenvalue_extract(const FourierExpansionSiegel2& f, const FourierExpansionSiegel2& g) {
  const long bound = std::min(f.bound, g.bound);
  std::optional<Rational> lambda;
  for (const auto& t : covered_forms(bound)) {
    Rational x = f(t), y = g(t);
    if (x == 0) {
      if (y != 0) throw NotEigenformError("not an eigenform (at this bound): a" + t.to_string() + " is 0 but the image is not");
      continue;
    }
    Rational r = y / x;
    if (lambda && *lambda != r)
      throw NotEigenformError("not an eigenform (at this bound): ratios " + to_string(*lambda) + " and " + to_string(r) +
                              " at " + t.to_string());
    lambda = r;
  }
  if (!lambda) throw DegenerateError("eigenvalue is indeterminate: all comparable coefficients are zero");
  return *lambda;
}

/// Hecke eigenvalue lambda_p of an elliptic eigenform of weight k; the Satake pair {beta, 1/beta}
/// has beta + 1/beta = lambda_p / p^{(k-1)/2}. Only the square of that sum is rational in general.
struct SatakePair {
  long weight = 0;
  Rational lambda;
  long p = 0;

  Rational sum_squared() const { return lambda * lambda / pow_int(Rational(p), weight - 1); }
  double sum() const { return lambda.get_d() / std::pow(static_cast<double>(p), (weight - 1) / 2.0); }
  /// (beta + 1/beta)(beta~ + 1/beta~), exact when the weights have even sum.
  Rational sum_product(const SatakePair& o) const {
    if (o.p != p) throw UsageError("Satake pairs at different primes");
    if ((weight + o.weight) % 2 != 0) throw UsageError("Satake sum product is irrational for weights of odd sum");
    return lambda * o.lambda / pow_int(Rational(p), (weight + o.weight - 2) / 2);
  }
};

/// A local Euler factor in X = p^{-s}, stored as its inverse polynomial with constant term 1.
struct LocalFactor {
  long p = 0;
  UPoly poly;

  std::string to_string() const { return poly.to_string(); }
  double evaluate_inverse(double x) const { return poly.evaluate(x); }
  /// The factor itself at X = p^{-s}; a vanishing inverse is a pole.
  double value_at(double s) const {
    double inv = poly.evaluate(std::pow(static_cast<double>(p), -s));
    if (inv == 0.0) throw DegenerateError("local factor has a pole at s = " + std::to_string(s));
    return 1.0 / inv;
  }
};

namespace detail {
/// 1 - e1 X + e2 X^2 - e1 X^3 + X^4 for the four products beta^{+-1} beta~^{+-1}.
inline UPoly satake_quartic(const SatakePair& b, const SatakePair& bt) {
  Rational e1 = b.sum_product(bt);
  Rational e2 = b.sum_squared() + bt.sum_squared() - 2;
  return UPoly(Vec{1, -e1, e2, -e1, 1});
}
}  // namespace detail

/// Inverse of the degree-(2n+1) standard local factor of the lift at a good prime.
inline LocalFactor standard_L_local(const SatakePair& b, const SatakePair& bt, int n, long p) {
  if (n < 1) throw UsageError("standard_L_local: degree must be positive");
  if (b.p != p || bt.p != p) throw UsageError("standard_L_local: Satake pairs belong to another prime");
  UPoly f = UPoly(Vec{1, -1}) * detail::satake_quartic(b, bt);
  for (int j = 1; j <= n - 2; ++j) {
    f = f * UPoly(Vec{1, -pow_int(Rational(p), j)});
    f = f * UPoly(Vec{1, -pow_int(Rational(p), -j)});
  }
  return {p, f};
}

/// Inverse Rankin-Selberg local factor in arithmetic normalisation; integer coefficients.
inline LocalFactor rankin_selberg_local(const Rational& af, const Rational& ag, long k1, long k2, long p) {
  const Rational q = pow_int(Rational(p), k1 + k2 - 2);
  Rational e1 = af * ag;
  Rational e2 = pow_int(Rational(p), k2 - 1) * af * af + pow_int(Rational(p), k1 - 1) * ag * ag - 2 * q;
  Rational e3 = af * ag * q;
  Rational e4 = q * q;
  return {p, UPoly(Vec{1, -e1, e2, -e3, e4})};
}

/// a(p^j) for j <= n from a(p^{j+1}) = a_p a(p^j) - p^{k-1} a(p^{j-1}).
inline std::vector<Rational> prime_power_coefficients(const Rational& ap, long k, long p, int n) {
  std::vector<Rational> a{1, ap};
  const Rational q = pow_int(Rational(p), k - 1);
  while (static_cast<int>(a.size()) <= n) a.push_back(ap * a[a.size() - 1] - q * a[a.size() - 2]);
  a.resize(static_cast<std::size_t>(n) + 1);
  return a;
}

/// RS(X) * sum_j a_f(p^j) a_g(p^j) X^j, truncated after X^n; equals 1 - p^{k1+k2-2} X^2 in theory.
inline UPoly rankin_selberg_check(const Rational& af, const Rational& ag, long k1, long k2, long p, int n) {
  auto a = prime_power_coefficients(af, k1, p, n);
  auto b = prime_power_coefficients(ag, k2, p, n);
  Vec d;
  for (int j = 0; j <= n; ++j) d.push_back(a[j] * b[j]);
  UPoly prod = rankin_selberg_local(af, ag, k1, k2, p).poly * UPoly(d);
  Vec c;
  for (int j = 0; j <= n; ++j) c.push_back(prod.coeff(static_cast<std::size_t>(j)));
  return UPoly(c);
}

/// Data for a prime where one of the two forms is not essential.
struct NonessentialData {
  long p = 0;
  int epsilon = 1;
  double alpha_sum = 0;  ///< alpha + 1/alpha
};

struct LambdaValue {
  double value = 1;
  bool pole = false;
  long pole_prime = 0;
  int pole_j = 0;
};

/// Bad-prime correction: prod_{p | N} prod_{j=1}^{n} (1 - p^{-s-2+j})^{-1}, with the j = 1, 2 factors
/// replaced by (1 + eps alpha^{+-1} p^{(-2s-1)/2})^{-1} at primes listed in nonessential.
inline LambdaValue lambda_N(long level, int n, double s, const std::vector<NonessentialData>& nonessential = {}) {
  if (level < 1) throw UsageError("lambda_N: level must be positive");
  if (n < 1) throw UsageError("lambda_N: degree must be positive");
  LambdaValue out;
  long rest = level;
  for (long p = 2; p <= rest; ++p) {
    if (rest % p != 0) continue;
    rest /= p;
    if (rest % p == 0) throw UsageError("lambda_N: level must be square-free");
    const NonessentialData* ne = nullptr;
    for (const auto& d : nonessential)
      if (d.p == p) ne = &d;
    int j0 = 1;
    if (ne) {
      double x = std::pow(static_cast<double>(p), (-2 * s - 1) / 2);
      double inv = 1 + ne->epsilon * ne->alpha_sum * x + x * x;
      if (inv == 0.0) return {0, true, p, 1};
      out.value /= inv;
      j0 = 3;
    }
    for (int j = j0; j <= n; ++j) {
      double inv = 1 - std::pow(static_cast<double>(p), -s - 2 + j);
      if (inv == 0.0) return {0, true, p, j};
      out.value /= inv;
    }
  }
  return out;
}

}  // namespace yoshida

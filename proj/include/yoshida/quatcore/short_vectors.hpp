#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <vector>

#include "yoshida/core/error.hpp"
#include "yoshida/core/matrix.hpp"
#include "yoshida/core/rational.hpp"

namespace yoshida {

using IntVec = std::vector<long>;

/// A lattice vector in basis coordinates with its norm-form value v^t G v / 2.
struct ShortVector {
  IntVec v;
  Rational norm;
};

namespace detail {

/// Exact Fincke-Pohst enumeration of {v : v^t G v <= 2 * bound}.
/// G = sum_i q_ii (x_i + sum_{j>i} q_ij x_j)^2 is computed in Q; interval endpoints come from
/// integer square roots, so no floating point is involved anywhere.
class FinckePohst {
 public:
  explicit FinckePohst(const Matrix& g) : n_(g.rows()) {
    if (!g.square() || !g.is_symmetric()) throw DegenerateError("Gram matrix must be square and symmetric");
    q_ = Matrix(n_, n_);
    for (std::size_t i = 0; i < n_; ++i) {
      Rational d = g(i, i);
      for (std::size_t k = 0; k < i; ++k) d -= q_(k, k) * q_(k, i) * q_(k, i);
      if (d <= 0) throw DegenerateError("Gram matrix is not positive definite");
      q_(i, i) = d;
      for (std::size_t j = i + 1; j < n_; ++j) {
        Rational s = g(i, j);
        for (std::size_t k = 0; k < i; ++k) s -= q_(k, k) * q_(k, i) * q_(k, j);
        q_(i, j) = s / d;
      }
    }
    // Integer copy of G scaled by a common denominator, used for exact leaf norms.
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = 0; j < n_; ++j) mpz_lcm(den_.get_mpz_t(), den_.get_mpz_t(), g(i, j).get_den_mpz_t());
    gi_.assign(n_ * n_, 0);
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = 0; j < n_; ++j) {
        Rational s = g(i, j) * den_;
        gi_[i * n_ + j] = to_long(s.get_num());
      }
  }

  /// Calls visit(v, qform) for every v with v^t G v <= 2*bound, where qform = den * v^t G v.
  void run(const Rational& bound, const std::function<void(const IntVec&, __int128)>& visit) const {
    if (sgn(bound) < 0) return;
    IntVec x(n_, 0);
    std::vector<Rational> budget(n_ + 1);
    budget[n_] = 2 * bound;
    if (n_ == 0) {
      visit(x, 0);
      return;
    }
    recurse(n_ - 1, x, budget, visit);
  }

  const Integer& denominator() const { return den_; }

 private:
  static void interval(const Rational& c, const Rational& t, Integer& lo, Integer& hi) {
    // Integers x with (x + c)^2 <= t.
    Integer s = floor_sqrt(t);
    lo = ceil_of(-c - s - 1);
    hi = floor_of(-c + s + 1);
    auto fits = [&](const Integer& x) {
      Rational y = x + c;
      return y * y <= t;
    };
    while (lo <= hi && !fits(lo)) ++lo;
    while (hi >= lo && !fits(hi)) --hi;
  }

  void recurse(std::size_t i, IntVec& x, std::vector<Rational>& budget,
               const std::function<void(const IntVec&, __int128)>& visit) const {
    Rational c = 0;
    for (std::size_t j = i + 1; j < n_; ++j)
      if (x[j]) c += q_(i, j) * x[j];
    Rational t = budget[i + 1] / q_(i, i);
    Integer lo, hi;
    interval(c, t, lo, hi);
    if (lo > hi) return;
    if (i == 0) {
      // q(x) = g00 x0^2 + 2 x0 * lin + rest, evaluated in integers.
      __int128 lin = 0, rest = 0;
      for (std::size_t j = 1; j < n_; ++j) {
        lin += static_cast<__int128>(gi_[j]) * x[j];
        for (std::size_t k = 1; k < n_; ++k) rest += static_cast<__int128>(gi_[j * n_ + k]) * x[j] * x[k];
      }
      const long a = to_long(lo), b = to_long(hi);
      for (long v = a; v <= b; ++v) {
        x[0] = v;
        __int128 qf = static_cast<__int128>(gi_[0]) * v * v + 2 * lin * v + rest;
        visit(x, qf);
      }
      x[0] = 0;
      return;
    }
    const long a = to_long(lo), b = to_long(hi);
    for (long v = a; v <= b; ++v) {
      x[i] = v;
      Rational y = c + v;
      budget[i] = budget[i + 1] - q_(i, i) * y * y;
      recurse(i - 1, x, budget, visit);
    }
    x[i] = 0;
  }

  std::size_t n_;
  Matrix q_;
  Integer den_ = 1;
  std::vector<long> gi_;
};

inline Rational qform_to_norm(__int128 qf, const Integer& den) {
  // qf = den * v^t G v, so the norm-form value is qf / (2 den).
  bool neg = qf < 0;
  unsigned __int128 u = neg ? static_cast<unsigned __int128>(-qf) : static_cast<unsigned __int128>(qf);
  Integer z = static_cast<unsigned long>(u >> 64);
  z <<= 64;
  z += static_cast<unsigned long>(u & ~0UL);
  if (neg) z = -z;
  Rational r(z, 2 * den);
  r.canonicalize();
  return r;
}

}  // namespace detail

/// Every integer vector v with v^t G v / 2 == m, each once, in lexicographic order.
inline std::vector<IntVec> short_vectors(const Matrix& g, const Rational& m) {
  if (sgn(m) < 0) throw UsageError("short_vectors: negative norm");
  detail::FinckePohst fp(g);
  std::vector<IntVec> out;
  Rational target = 2 * m * fp.denominator();
  if (!is_integer(target)) return out;
  const Integer t = target.get_num();
  if (!t.fits_slong_p()) throw Error("short_vectors: norm too large");
  const __int128 want = t.get_si();
  fp.run(m, [&](const IntVec& v, __int128 qf) {
    if (qf == want) out.push_back(v);
  });
  std::sort(out.begin(), out.end());
  return out;
}

/// Every vector with norm-form value <= mmax, sorted by (norm, lexicographic coordinates).
inline std::vector<ShortVector> short_vectors_upto(const Matrix& g, const Rational& mmax) {
  detail::FinckePohst fp(g);
  std::vector<std::pair<__int128, IntVec>> raw;
  fp.run(mmax, [&](const IntVec& v, __int128 qf) { raw.emplace_back(qf, v); });
  std::sort(raw.begin(), raw.end());
  std::vector<ShortVector> out;
  out.reserve(raw.size());
  for (auto& [qf, v] : raw) out.push_back({std::move(v), detail::qform_to_norm(qf, fp.denominator())});
  return out;
}

}  // namespace yoshida

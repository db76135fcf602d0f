#pragma once

#include <array>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "yoshida/core/error.hpp"
#include "yoshida/core/matrix.hpp"
#include "yoshida/core/rational.hpp"

namespace yoshida {

class QuaternionAlgebra;
using AlgebraPtr = std::shared_ptr<const QuaternionAlgebra>;

/// Rank-4 algebra over Q given by structure constants f_i f_j = sum_k c[i][j][k] f_k.
/// Construction verifies the unit law, associativity, that conjugation x -> tr(x) - x
/// gives a scalar norm, and that tr(x ybar) is positive definite.
class QuaternionAlgebra {
 public:
  using Table = std::array<std::array<Vec, 4>, 4>;

  static AlgebraPtr make(Table constants, Vec unit, std::vector<std::string> names = {}, std::string name = {}) {
    return AlgebraPtr(new QuaternionAlgebra(std::move(constants), std::move(unit), std::move(names), std::move(name)));
  }

  const Table& structure_constants() const { return c_; }
  const Vec& unit() const { return unit_; }
  const std::vector<std::string>& basis_names() const { return names_; }
  const std::string& name() const { return name_; }

  Vec basis_vector(std::size_t i) const {
    Vec v(4);
    v[i] = 1;
    return v;
  }

  Vec mul(const Vec& x, const Vec& y) const {
    Vec out(4);
    for (std::size_t i = 0; i < 4; ++i) {
      if (x[i] == 0) continue;
      for (std::size_t j = 0; j < 4; ++j) {
        if (y[j] == 0) continue;
        Rational s = x[i] * y[j];
        for (std::size_t k = 0; k < 4; ++k)
          if (c_[i][j][k] != 0) out[k] += s * c_[i][j][k];
      }
    }
    return out;
  }

  Rational trace(const Vec& x) const { return dot(trace_, x); }

  Vec conj(const Vec& x) const {
    Rational t = trace(x);
    Vec out(4);
    for (std::size_t k = 0; k < 4; ++k) out[k] = t * unit_[k] - x[k];
    return out;
  }

  /// n(x) = x * conj(x), read off as the scalar multiple of the unit.
  Rational norm(const Vec& x) const {
    Rational s = 0;
    for (std::size_t i = 0; i < 4; ++i)
      for (std::size_t j = 0; j < 4; ++j) s += x[i] * x[j] * norm_form_(i, j);
    return s;
  }

  /// tr(x * conj(y)).
  Rational bilinear(const Vec& x, const Vec& y) const {
    Rational s = 0;
    for (std::size_t i = 0; i < 4; ++i)
      for (std::size_t j = 0; j < 4; ++j) s += x[i] * y[j] * gram_(i, j);
    return s;
  }

  Vec inverse(const Vec& x) const {
    Rational n = norm(x);
    if (n == 0) throw UsageError("element of norm zero is not invertible");
    Vec c = conj(x);
    for (auto& v : c) v /= n;
    return c;
  }

  /// Gram matrix of tr(f_i conj(f_j)) on the structure basis.
  const Matrix& basis_gram() const { return gram_; }
  /// Traces of the structure basis.
  const Vec& basis_traces() const { return trace_; }

  /// Coordinates of c * 1.
  Vec scalar(const Rational& c) const {
    Vec v = unit_;
    for (auto& x : v) x *= c;
    return v;
  }

  /// Scalar s with v == s * 1, or throws.
  Rational as_scalar(const Vec& v) const {
    std::size_t pivot = 0;
    while (unit_[pivot] == 0) ++pivot;
    Rational s = v[pivot] / unit_[pivot];
    for (std::size_t k = 0; k < 4; ++k)
      if (v[k] != s * unit_[k]) throw UsageError("element is not a scalar");
    return s;
  }

 private:
  QuaternionAlgebra(Table constants, Vec unit, std::vector<std::string> names, std::string name)
      : c_(std::move(constants)), unit_(std::move(unit)), names_(std::move(names)), name_(std::move(name)) {
    for (const auto& row : c_)
      for (const auto& v : row)
        if (v.size() != 4) throw FormatError("structure constants must be 4x4 arrays of 4-vectors");
    if (unit_.size() != 4) throw FormatError("unit must have 4 coordinates");
    if (names_.empty()) names_ = {"f0", "f1", "f2", "f3"};
    if (names_.size() != 4) throw FormatError("basis_names must have 4 entries");
    validate();
  }

  void validate() {
    for (std::size_t i = 0; i < 4; ++i) {
      Vec fi = basis_vector(i);
      if (mul(unit_, fi) != fi || mul(fi, unit_) != fi)
        throw UsageError("unit law fails for " + names_[i]);
    }
    for (std::size_t i = 0; i < 4; ++i)
      for (std::size_t j = 0; j < 4; ++j)
        for (std::size_t k = 0; k < 4; ++k) {
          Vec a = mul(mul(basis_vector(i), basis_vector(j)), basis_vector(k));
          Vec b = mul(basis_vector(i), mul(basis_vector(j), basis_vector(k)));
          if (a != b)
            throw UsageError("multiplication is not associative on (" + names_[i] + ", " + names_[j] + ", " +
                             names_[k] + ")");
        }
    // Reduced trace is half the trace of left multiplication.
    trace_.assign(4, 0);
    for (std::size_t i = 0; i < 4; ++i) {
      Rational t = 0;
      for (std::size_t j = 0; j < 4; ++j) t += c_[i][j][j];
      trace_[i] = t / 2;
    }
    if (trace(unit_) != 2) throw UsageError("algebra is not of degree 2 (tr(1) != 2)");
    norm_form_ = Matrix(4, 4);
    gram_ = Matrix(4, 4);
    for (std::size_t i = 0; i < 4; ++i)
      for (std::size_t j = 0; j < 4; ++j) {
        Vec p = mul(basis_vector(i), conj(basis_vector(j)));
        Vec q = mul(basis_vector(j), conj(basis_vector(i)));
        Vec s(4);
        for (std::size_t k = 0; k < 4; ++k) s[k] = p[k] + q[k];
        Rational b;
        try {
          b = as_scalar(s);
        } catch (const UsageError&) {
          throw UsageError("x * conj(x) is not a scalar; not a quaternion algebra");
        }
        gram_(i, j) = b;
        norm_form_(i, j) = b / 2;
      }
    for (std::size_t k = 1; k <= 4; ++k) {
      Matrix minor(k, k);
      for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < k; ++j) minor(i, j) = gram_(i, j);
      if (det(minor) <= 0) throw DegenerateError("norm form is not positive definite; algebra is not definite");
    }
  }

  Table c_;
  Vec unit_;
  std::vector<std::string> names_;
  std::string name_;
  Vec trace_;
  Matrix norm_form_;
  Matrix gram_;
};

/// An element together with the algebra it lives in.
struct QuatElement {
  AlgebraPtr algebra;
  Vec coords;

  QuatElement() = default;
  QuatElement(AlgebraPtr a, Vec c) : algebra(std::move(a)), coords(std::move(c)) {
    if (coords.size() != 4) throw UsageError("quaternion element needs 4 coordinates");
  }

  static QuatElement one(const AlgebraPtr& a) { return {a, a->unit()}; }
  static QuatElement basis(const AlgebraPtr& a, std::size_t i) { return {a, a->basis_vector(i)}; }

  friend bool operator==(const QuatElement& x, const QuatElement& y) {
    return x.algebra == y.algebra && x.coords == y.coords;
  }
};

namespace detail {
inline void same_algebra(const QuatElement& x, const QuatElement& y) {
  if (!x.algebra || x.algebra != y.algebra) throw UsageError("elements belong to different algebras");
}
}  // namespace detail

inline QuatElement multiply(const QuatElement& x, const QuatElement& y) {
  detail::same_algebra(x, y);
  return {x.algebra, x.algebra->mul(x.coords, y.coords)};
}
inline QuatElement operator*(const QuatElement& x, const QuatElement& y) { return multiply(x, y); }
inline QuatElement operator+(const QuatElement& x, const QuatElement& y) {
  detail::same_algebra(x, y);
  Vec v = x.coords;
  for (std::size_t k = 0; k < 4; ++k) v[k] += y.coords[k];
  return {x.algebra, v};
}
inline QuatElement operator-(const QuatElement& x, const QuatElement& y) {
  detail::same_algebra(x, y);
  Vec v = x.coords;
  for (std::size_t k = 0; k < 4; ++k) v[k] -= y.coords[k];
  return {x.algebra, v};
}
inline QuatElement operator*(const Rational& s, const QuatElement& x) {
  Vec v = x.coords;
  for (auto& c : v) c *= s;
  return {x.algebra, v};
}

struct ConjTraceNorm {
  QuatElement conj;
  Rational trace;
  Rational norm;
};

/// (conj(x), tr(x), n(x)); the relation x * conj(x) = n(x) * 1 is checked.
inline ConjTraceNorm conj_trace_norm(const QuatElement& x) {
  const auto& a = *x.algebra;
  ConjTraceNorm out{{x.algebra, a.conj(x.coords)}, a.trace(x.coords), a.norm(x.coords)};
  if (a.mul(x.coords, out.conj.coords) != a.scalar(out.norm)) throw Error("x * conj(x) is not n(x)");
  return out;
}

inline QuatElement conj(const QuatElement& x) { return {x.algebra, x.algebra->conj(x.coords)}; }
inline Rational trace(const QuatElement& x) { return x.algebra->trace(x.coords); }
inline Rational norm(const QuatElement& x) { return x.algebra->norm(x.coords); }

}  // namespace yoshida

#pragma once

#include <string>
#include <utility>
#include <vector>

#include "yoshida/core/error.hpp"
#include "yoshida/core/matrix.hpp"
#include "yoshida/quatcore/algebra.hpp"
#include "yoshida/quatcore/short_vectors.hpp"

namespace yoshida {

/// Full-rank Z-lattice in a quaternion algebra. The basis rows are algebra coordinates.
class Lattice {
 public:
  Lattice() = default;

  Lattice(AlgebraPtr algebra, std::vector<Vec> basis) : algebra_(std::move(algebra)) {
    if (basis.size() != 4) throw DegenerateError("lattice basis must have 4 vectors");
    basis_ = Matrix::from_rows(basis);
    if (basis_.cols() != 4) throw DegenerateError("lattice basis vectors must have 4 coordinates");
    if (det(basis_) == 0) throw DegenerateError("lattice basis is linearly dependent");
    inverse_ = inverse(basis_);
    gram_ = Matrix(4, 4);
    for (std::size_t i = 0; i < 4; ++i)
      for (std::size_t j = 0; j < 4; ++j) gram_(i, j) = algebra_->bilinear(basis_.row(i), basis_.row(j));
  }

  /// Z-span of arbitrary generators; must have rank 4.
  static Lattice span(const AlgebraPtr& algebra, const std::vector<Vec>& gens) {
    auto rows = z_span_basis(gens);
    if (rows.size() != 4) throw DegenerateError("generators do not span a full-rank lattice");
    return Lattice(algebra, rows);
  }

  static Lattice standard(const AlgebraPtr& algebra) {
    std::vector<Vec> rows;
    for (std::size_t i = 0; i < 4; ++i) rows.push_back(algebra->basis_vector(i));
    return Lattice(algebra, rows);
  }

  const AlgebraPtr& algebra() const { return algebra_; }
  const Matrix& basis_matrix() const { return basis_; }
  Vec basis(std::size_t i) const { return basis_.row(i); }
  std::vector<Vec> basis_vectors() const {
    std::vector<Vec> out;
    for (std::size_t i = 0; i < 4; ++i) out.push_back(basis_.row(i));
    return out;
  }
  const Matrix& gram() const { return gram_; }
  Rational gram_det() const { return det(gram_); }

  /// Lattice coordinates c with x = sum c_i b_i.
  Vec coords(const Vec& x) const { return inverse_.transpose() * x; }

  /// Algebra element from integer lattice coordinates.
  Vec element(const IntVec& c) const {
    Vec x(4);
    for (std::size_t i = 0; i < 4; ++i)
      if (c[i])
        for (std::size_t k = 0; k < 4; ++k) x[k] += basis_(i, k) * c[i];
    return x;
  }

  bool contains(const Vec& x) const {
    for (const auto& c : coords(x))
      if (!is_integer(c)) return false;
    return true;
  }
  bool contains(const Lattice& other) const {
    for (std::size_t i = 0; i < 4; ++i)
      if (!contains(other.basis(i))) return false;
    return true;
  }

  /// Canonical echelon basis; equal lattices have equal canonical bases.
  std::vector<Vec> canonical_basis() const { return z_span_basis(basis_vectors()); }

  friend bool operator==(const Lattice& a, const Lattice& b) {
    return a.algebra_ == b.algebra_ && a.contains(b) && b.contains(a);
  }

  Lattice scaled(const Rational& s) const {
    if (s == 0) throw DegenerateError("cannot scale a lattice by zero");
    auto rows = basis_vectors();
    for (auto& r : rows)
      for (auto& v : r) v *= s;
    return Lattice(algebra_, rows);
  }

  Lattice conjugate() const {
    auto rows = basis_vectors();
    for (auto& r : rows) r = algebra_->conj(r);
    return Lattice(algebra_, rows);
  }

  /// gamma * L (left) or L * gamma (right).
  Lattice left_multiplied(const Vec& gamma) const {
    auto rows = basis_vectors();
    for (auto& r : rows) r = algebra_->mul(gamma, r);
    return Lattice(algebra_, rows);
  }
  Lattice right_multiplied(const Vec& gamma) const {
    auto rows = basis_vectors();
    for (auto& r : rows) r = algebra_->mul(r, gamma);
    return Lattice(algebra_, rows);
  }

  /// Index [M : L] as a rational for any full-rank pair (volume ratio).
  Rational covolume_ratio(const Lattice& m) const { return abs(det(basis_) / det(m.basis_)); }

 private:
  AlgebraPtr algebra_;
  Matrix basis_;
  Matrix inverse_;
  Matrix gram_;
};

inline Lattice product(const Lattice& a, const Lattice& b) {
  if (a.algebra() != b.algebra()) throw UsageError("lattices belong to different algebras");
  std::vector<Vec> gens;
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) gens.push_back(a.algebra()->mul(a.basis(i), b.basis(j)));
  return Lattice::span(a.algebra(), gens);
}

inline Lattice sum(const Lattice& a, const Lattice& b) {
  auto gens = a.basis_vectors();
  for (auto& v : b.basis_vectors()) gens.push_back(v);
  return Lattice::span(a.algebra(), gens);
}

namespace detail {
/// Dual basis for the coordinate dot product.
inline std::vector<Vec> dual_rows(const std::vector<Vec>& rows) {
  Matrix inv_t = inverse(Matrix::from_rows(rows)).transpose();
  std::vector<Vec> out;
  for (std::size_t i = 0; i < inv_t.rows(); ++i) out.push_back(inv_t.row(i));
  return out;
}
}  // namespace detail

/// Intersection of full-rank lattices via duality: (A cap B)^# = A^# + B^#.
inline Lattice intersection(const std::vector<Lattice>& lats) {
  if (lats.empty()) throw UsageError("intersection of no lattices");
  std::vector<Vec> gens;
  for (const auto& l : lats)
    for (auto& v : detail::dual_rows(l.basis_vectors())) gens.push_back(v);
  auto dual_sum = z_span_basis(gens);
  return Lattice(lats.front().algebra(), detail::dual_rows(dual_sum));
}

/// Gram matrix tr(b_i conj(b_j)) of the lattice basis.
inline Matrix gram_matrix(const Lattice& l) { return l.gram(); }

}  // namespace yoshida

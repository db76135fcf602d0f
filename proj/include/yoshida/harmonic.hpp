#pragma once

#include <memory>
#include <utility>
#include <vector>

#include "yoshida/core/error.hpp"
#include "yoshida/core/matrix.hpp"
#include "yoshida/core/polynomial.hpp"
#include "yoshida/quatcore.hpp"

namespace yoshida {

/// Projection to the trace-zero part: u - tr(u)/2.
inline Vec pim(const QuaternionAlgebra& a, const Vec& u) {
  Rational h = a.trace(u) / 2;
  Vec out = u;
  for (std::size_t k = 0; k < 4; ++k) out[k] -= h * a.unit()[k];
  return out;
}

/// A basis e_1, e_2, e_3 of the trace-zero subspace with Gram matrix G0 = tr(e_i conj(e_j)).
class HarmonicFrame {
 public:
  HarmonicFrame(AlgebraPtr algebra, std::vector<Vec> basis) : algebra_(std::move(algebra)), basis_(std::move(basis)) {
    if (basis_.size() != 3) throw UsageError("harmonic frame needs 3 vectors");
    for (const auto& e : basis_)
      if (algebra_->trace(e) != 0) throw UsageError("harmonic frame vectors must have trace zero");
    gram_ = Matrix(3, 3);
    for (std::size_t i = 0; i < 3; ++i)
      for (std::size_t j = 0; j < 3; ++j) gram_(i, j) = algebra_->bilinear(basis_[i], basis_[j]);
    if (det(gram_) <= 0) throw DegenerateError("harmonic frame Gram matrix is not positive definite");
    gram_inv_ = inverse(gram_);
    // Left inverse of the 4x3 column matrix of the frame.
    Matrix b = Matrix::from_columns(basis_);
    to_frame_ = inverse(b.transpose() * b) * b.transpose();
  }

  /// The frame pim(f_1), pim(f_2), pim(f_3) of the structure basis; for trace-zero x = sum a_i f_i
  /// the frame coordinates are (a_1, a_2, a_3).
  static std::shared_ptr<const HarmonicFrame> standard(const AlgebraPtr& a) {
    std::vector<Vec> basis;
    for (std::size_t i = 1; i < 4; ++i) basis.push_back(pim(*a, a->basis_vector(i)));
    return std::make_shared<const HarmonicFrame>(a, basis);
  }

  const AlgebraPtr& algebra() const { return algebra_; }
  const std::vector<Vec>& basis() const { return basis_; }
  const Matrix& gram() const { return gram_; }
  const Matrix& gram_inverse() const { return gram_inv_; }
  /// 3x4 matrix taking algebra coordinates of a trace-zero element to frame coordinates.
  const Matrix& to_frame() const { return to_frame_; }

  Vec coords(const Vec& x) const {
    if (algebra_->trace(x) != 0) throw UsageError("frame coordinates of an element with nonzero trace");
    return to_frame_ * x;
  }
  Vec element(const Vec& z) const {
    Vec x(4);
    for (std::size_t k = 0; k < 3; ++k)
      for (std::size_t t = 0; t < 4; ++t) x[t] += z[k] * basis_[k][t];
    return x;
  }

  /// Matrix whose column k holds the frame coordinates of f(e_k).
  template <class F>
  Matrix matrix_of(F&& f) const {
    std::vector<Vec> cols;
    for (const auto& e : basis_) cols.push_back(coords(f(e)));
    return Matrix::from_columns(cols);
  }

 private:
  AlgebraPtr algebra_;
  std::vector<Vec> basis_;
  Matrix gram_;
  Matrix gram_inv_;
  Matrix to_frame_;
};

using FramePtr = std::shared_ptr<const HarmonicFrame>;

/// Homogeneous polynomial in frame coordinates of the trace-zero subspace.
struct HarmonicPoly {
  int degree = 0;
  Poly poly;
  FramePtr frame;

  friend bool operator==(const HarmonicPoly& a, const HarmonicPoly& b) {
    return a.degree == b.degree && a.poly == b.poly && a.frame == b.frame;
  }
};

/// The Laplacian sum (G0^{-1})_{ij} d_i d_j of the frame.
inline Poly adapted_laplacian(const Poly& p, const HarmonicFrame& frame) {
  return p.laplacian(frame.gram_inverse());
}

namespace detail {
/// P composed with z -> M z.
inline Poly substitute_linear(const Poly& p, const Matrix& m) {
  std::vector<Poly> images;
  for (std::size_t i = 0; i < m.rows(); ++i) images.push_back(Poly::linear(m.row(i)));
  return p.compose(images);
}

inline Rational factorial_weight(const Exponent& e) {
  Integer w = 1;
  for (int k : e)
    for (int t = 2; t <= k; ++t) w *= t;
  return Rational(w);
}
}  // namespace detail

/// (tau(y) P)(z) = P(y^{-1} z y).
inline HarmonicPoly tau_action(const Vec& y, const HarmonicPoly& p) {
  const auto& a = *p.frame->algebra();
  if (a.norm(y) == 0) throw UsageError("tau_action: element has norm zero");
  Vec yi = a.inverse(y);
  Matrix m = p.frame->matrix_of([&](const Vec& e) { return a.mul(a.mul(yi, e), y); });
  return {p.degree, detail::substitute_linear(p.poly, m), p.frame};
}

/// z -> P(conj(y) z y) = n(y)^nu (tau(y) P)(z); integral whenever P and y are.
inline HarmonicPoly conj_action(const Vec& y, const HarmonicPoly& p) {
  const auto& a = *p.frame->algebra();
  Vec yb = a.conj(y);
  Matrix m = p.frame->matrix_of([&](const Vec& e) { return a.mul(a.mul(yb, e), y); });
  return {p.degree, detail::substitute_linear(p.poly, m), p.frame};
}

/// Fischer pairing v(G0^{-1} d) w; equals v * w in degree zero.
inline Rational pairing(const HarmonicPoly& v, const HarmonicPoly& w) {
  if (v.degree != w.degree) throw UsageError("pairing: degree mismatch");
  if (v.frame != w.frame) throw UsageError("pairing: polynomials use different frames");
  Poly vt = detail::substitute_linear(v.poly, v.frame->gram_inverse());
  Rational s = 0;
  for (const auto& [e, c] : vt.terms()) {
    Rational d = w.poly.coeff(e);
    if (d != 0) s += c * d * detail::factorial_weight(e);
  }
  return s;
}

/// U_nu: a basis of the harmonic polynomials of degree nu and the pairing matrix on it.
class HarmSpace {
 public:
  HarmSpace(int nu, FramePtr frame) : nu_(nu), frame_(std::move(frame)) {
    if (nu < 0) throw UsageError("harm_basis: negative degree");
    monos_ = monomials(3, nu);
    std::vector<Exponent> lower = nu >= 2 ? monomials(3, nu - 2) : std::vector<Exponent>{};
    Matrix lap(lower.size(), monos_.size());
    for (std::size_t j = 0; j < monos_.size(); ++j) {
      Poly m(3);
      m.add_term(monos_[j], 1);
      Poly l = adapted_laplacian(m, *frame_);
      for (std::size_t i = 0; i < lower.size(); ++i) lap(i, j) = l.coeff(lower[i]);
    }
    std::vector<Vec> kernel;
    if (lower.empty()) {
      for (std::size_t j = 0; j < monos_.size(); ++j) {
        Vec v(monos_.size());
        v[j] = 1;
        kernel.push_back(v);
      }
    } else {
      kernel = nullspace(lap);
    }
    if (kernel.size() != static_cast<std::size_t>(2 * nu + 1))
      throw Error("harmonic space has unexpected dimension " + std::to_string(kernel.size()));
    for (const auto& k : kernel) {
      Poly p(3);
      for (std::size_t j = 0; j < monos_.size(); ++j) p.add_term(monos_[j], k[j]);
      basis_.push_back({nu, p, frame_});
    }
    basis_coeffs_ = Matrix::from_columns(kernel);
    pairing_ = Matrix(dim(), dim());
    for (std::size_t i = 0; i < dim(); ++i)
      for (std::size_t j = 0; j < dim(); ++j) pairing_(i, j) = yoshida::pairing(basis_[i], basis_[j]);
  }

  int nu() const { return nu_; }
  std::size_t dim() const { return basis_.size(); }
  const FramePtr& frame() const { return frame_; }
  const std::vector<HarmonicPoly>& basis() const { return basis_; }
  const Matrix& pairing_matrix() const { return pairing_; }

  /// Coordinates of a harmonic polynomial in this basis.
  Vec coords(const HarmonicPoly& p) const {
    if (p.degree != nu_) throw UsageError("coords: degree mismatch");
    Matrix rhs(monos_.size(), 1);
    for (std::size_t j = 0; j < monos_.size(); ++j) rhs(j, 0) = p.poly.coeff(monos_[j]);
    try {
      return solve(basis_coeffs_, rhs).col(0);
    } catch (const UsageError&) {
      throw UsageError("polynomial is not harmonic");
    }
  }

  HarmonicPoly poly(const Vec& c) const {
    Poly p(3);
    for (std::size_t k = 0; k < dim(); ++k)
      if (c[k] != 0) p += c[k] * basis_[k].poly;
    return {nu_, p, frame_};
  }

  Rational pair(const Vec& a, const Vec& b) const { return dot(a, pairing_ * b); }

  /// Matrix of tau(y) on basis coordinates.
  Matrix tau_matrix(const Vec& y) const {
    std::vector<Vec> cols;
    for (const auto& b : basis_) cols.push_back(coords(tau_action(y, b)));
    return Matrix::from_columns(cols);
  }

  /// Matrix of P -> P(conj(y) z y) on basis coordinates.
  Matrix conj_matrix(const Vec& y) const {
    std::vector<Vec> cols;
    for (const auto& b : basis_) cols.push_back(coords(conj_action(y, b)));
    return Matrix::from_columns(cols);
  }

  /// Basis (as columns of coordinates) of the vectors fixed by tau(u) for every u in units.
  std::vector<Vec> invariants(const std::vector<Vec>& units) const {
    Matrix stacked(0, 0);
    std::vector<Vec> rows;
    for (const auto& u : units) {
      Matrix t = tau_matrix(u) - Matrix::identity(dim());
      for (std::size_t i = 0; i < t.rows(); ++i) rows.push_back(t.row(i));
    }
    if (rows.empty()) {
      std::vector<Vec> all;
      for (std::size_t k = 0; k < dim(); ++k) {
        Vec v(dim());
        v[k] = 1;
        all.push_back(v);
      }
      return all;
    }
    return nullspace(Matrix::from_rows(rows));
  }

 private:
  int nu_;
  FramePtr frame_;
  std::vector<Exponent> monos_;
  std::vector<HarmonicPoly> basis_;
  Matrix basis_coeffs_;
  Matrix pairing_;
};

inline HarmSpace harm_basis(int nu, const FramePtr& frame) { return HarmSpace(nu, frame); }

namespace detail {
/// Product of two algebra elements whose coordinates are polynomials.
inline std::vector<Poly> mul_symbolic(const QuaternionAlgebra& a, const std::vector<Poly>& x,
                                      const std::vector<Poly>& y) {
  std::size_t n = x.front().nvars();
  std::vector<Poly> out(4, Poly(n));
  const auto& c = a.structure_constants();
  for (std::size_t i = 0; i < 4; ++i) {
    if (x[i].is_zero()) continue;
    for (std::size_t j = 0; j < 4; ++j) {
      if (y[j].is_zero()) continue;
      Poly xy = x[i] * y[j];
      for (std::size_t k = 0; k < 4; ++k)
        if (c[i][j][k] != 0) out[k] += c[i][j][k] * xy;
    }
  }
  return out;
}

inline std::vector<Poly> conj_symbolic(const QuaternionAlgebra& a, const std::vector<Poly>& x) {
  std::size_t n = x.front().nvars();
  Poly t(n);
  for (std::size_t i = 0; i < 4; ++i) t += a.basis_traces()[i] * x[i];
  std::vector<Poly> out(4, Poly(n));
  for (std::size_t k = 0; k < 4; ++k) out[k] = a.unit()[k] * t - x[k];
  return out;
}

/// Coordinates x_{offset}, ..., x_{offset+3} of a generic element in an n-variable ring.
inline std::vector<Poly> generic_element(std::size_t n, std::size_t offset) {
  std::vector<Poly> x;
  for (std::size_t k = 0; k < 4; ++k) x.push_back(Poly::variable(n, offset + k));
  return x;
}

/// Frame coordinates of pim(u) for u with polynomial coordinates.
inline std::vector<Poly> frame_coords_symbolic(const HarmonicFrame& frame, const std::vector<Poly>& u) {
  const auto& a = *frame.algebra();
  std::size_t n = u.front().nvars();
  Poly half_trace(n);
  for (std::size_t i = 0; i < 4; ++i) half_trace += (a.basis_traces()[i] / 2) * u[i];
  std::vector<Poly> pu(4, Poly(n));
  for (std::size_t k = 0; k < 4; ++k) pu[k] = u[k] - a.unit()[k] * half_trace;
  std::vector<Poly> out(3, Poly(n));
  for (std::size_t r = 0; r < 3; ++r)
    for (std::size_t k = 0; k < 4; ++k)
      if (frame.to_frame()(r, k) != 0) out[r] += frame.to_frame()(r, k) * pu[k];
  return out;
}
}  // namespace detail

/// x -> <<v1, z -> v2(conj(x) z x)>> on algebra coordinates; homogeneous of degree 2 nu.
inline Poly lift_poly_deg1(const HarmonicPoly& v1, const HarmonicPoly& v2) {
  if (v1.degree != v2.degree) throw UsageError("lift_poly_deg1: degree mismatch");
  if (v1.frame != v2.frame) throw UsageError("lift_poly_deg1: different frames");
  const auto& frame = *v1.frame;
  const auto& a = *frame.algebra();
  // Ring: z_0..z_2 then x_0..x_3.
  const std::size_t n = 7;
  auto x = detail::generic_element(n, 3);
  std::vector<Poly> z_elem(4, Poly(n));
  for (std::size_t k = 0; k < 3; ++k)
    for (std::size_t t = 0; t < 4; ++t)
      if (frame.basis()[k][t] != 0) z_elem[t] += frame.basis()[k][t] * Poly::variable(n, k);
  auto conj_z_x = detail::mul_symbolic(a, detail::mul_symbolic(a, detail::conj_symbolic(a, x), z_elem), x);
  auto images = detail::frame_coords_symbolic(frame, conj_z_x);
  Poly q = v2.poly.compose(images);
  Poly vt = detail::substitute_linear(v1.poly, frame.gram_inverse());
  Poly out(4);
  for (const auto& [e, c] : q.terms()) {
    Exponent ez(e.begin(), e.begin() + 3);
    Rational d = vt.coeff(ez);
    if (d == 0) continue;
    out.add_term(Exponent(e.begin() + 3, e.end()), c * d * detail::factorial_weight(ez));
  }
  return out;
}

/// (x1, x2) -> v(pim(x1 conj(x2))) on algebra coordinates (variables 0..3 and 4..7).
inline Poly lift_poly_deg2(const HarmonicPoly& v) {
  const auto& frame = *v.frame;
  const auto& a = *frame.algebra();
  const std::size_t n = 8;
  auto x1 = detail::generic_element(n, 0);
  auto x2 = detail::generic_element(n, 4);
  auto u = detail::mul_symbolic(a, x1, detail::conj_symbolic(a, x2));
  return v.poly.compose(detail::frame_coords_symbolic(frame, u));
}

/// Polynomial on lattice coordinates: substitutes algebra coordinates x = B^t c in each block of 4.
inline Poly to_lattice_coords(const Poly& p, const std::vector<const Lattice*>& blocks) {
  if (p.nvars() != 4 * blocks.size()) throw UsageError("to_lattice_coords: variable count mismatch");
  std::vector<Poly> images;
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    const Matrix& bm = blocks[b]->basis_matrix();
    for (std::size_t k = 0; k < 4; ++k) {
      Vec row(p.nvars());
      for (std::size_t i = 0; i < 4; ++i) row[4 * b + i] = bm(i, k);
      images.push_back(Poly::linear(row));
    }
  }
  return p.compose(images);
}

}  // namespace yoshida

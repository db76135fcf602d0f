#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "yoshida/core/error.hpp"
#include "yoshida/core/matrix.hpp"
#include "yoshida/core/parallel.hpp"
#include "yoshida/core/upoly.hpp"
#include "yoshida/harmonic.hpp"
#include "yoshida/quatcore.hpp"

namespace yoshida {

/// phi(y_i) for each class i, as coordinates in the U_nu basis.
struct AutomorphicForm {
  int nu = 0;
  std::vector<Vec> values;

  friend bool operator==(const AutomorphicForm& a, const AutomorphicForm& b) {
    return a.nu == b.nu && a.values == b.values;
  }
};

/// Class set, harmonic space and cross lattices L_ij = I_i conj(I_j) for one weight nu.
/// The normalised norm on L_ij is n(x) / (n(I_i) n(I_j)).
class FormSpace {
 public:
  FormSpace(ClassSet cs, int nu) : cs_(std::move(cs)), harm_(nu, HarmonicFrame::standard(cs_.order.algebra())) {
    const std::size_t h = cs_.size();
    cross_.resize(h);
    scale_.resize(h);
    for (std::size_t i = 0; i < h; ++i)
      for (std::size_t j = 0; j < h; ++j) {
        cross_[i].push_back(product(cs_.ideals[i].lattice, cs_.ideals[j].lattice.conjugate()));
        scale_[i].push_back(cs_.ideals[i].reduced_norm * cs_.ideals[j].reduced_norm);
      }
    for (std::size_t i = 0; i < h; ++i) {
      auto inv = harm_.invariants(cs_.ideals[i].left_order.units());
      for (auto& v : inv) {
        Vec full(dim());
        for (std::size_t k = 0; k < block(); ++k) full[i * block() + k] = v[k];
        invariant_basis_.push_back(std::move(full));
      }
    }
  }

  const ClassSet& class_set() const { return cs_; }
  const HarmSpace& harm() const { return harm_; }
  int nu() const { return harm_.nu(); }
  std::size_t classes() const { return cs_.size(); }
  std::size_t block() const { return harm_.dim(); }
  std::size_t dim() const { return classes() * block(); }
  const Lattice& cross(std::size_t i, std::size_t j) const { return cross_[i][j]; }
  const Rational& cross_scale(std::size_t i, std::size_t j) const { return scale_[i][j]; }
  Matrix normalized_gram(std::size_t i, std::size_t j) const { return (1 / scale_[i][j]) * cross_[i][j].gram(); }

  /// Basis of the forms: values invariant under the unit group of each left order.
  const std::vector<Vec>& invariant_basis() const { return invariant_basis_; }

  Vec flatten(const AutomorphicForm& f) const {
    check(f);
    Vec v;
    for (const auto& x : f.values) v.insert(v.end(), x.begin(), x.end());
    return v;
  }
  AutomorphicForm unflatten(const Vec& v) const {
    if (v.size() != dim()) throw UsageError("form vector has wrong length");
    AutomorphicForm f{nu(), {}};
    for (std::size_t i = 0; i < classes(); ++i)
      f.values.emplace_back(v.begin() + i * block(), v.begin() + (i + 1) * block());
    return f;
  }
  void check(const AutomorphicForm& f) const {
    if (f.nu != nu()) throw UsageError("form has the wrong weight");
    if (f.values.size() != classes()) throw UsageError("form length does not match the class number");
    for (const auto& x : f.values)
      if (x.size() != block()) throw UsageError("form value has the wrong dimension");
  }

  AutomorphicForm constant_one() const {
    if (nu() != 0) throw UsageError("constant form exists only for nu = 0");
    return {0, std::vector<Vec>(classes(), Vec{1})};
  }

  /// The level: sqrt(det gram(R)).
  long level() const { return to_long(order_level(cs_.order)); }

 private:
  ClassSet cs_;
  HarmSpace harm_;
  std::vector<std::vector<Lattice>> cross_;
  std::vector<std::vector<Rational>> scale_;
  std::vector<Vec> invariant_basis_;
};

/// Block matrix acting on flattened forms: (B phi)(y_i) = sum_j B_ij phi(y_j).
struct BrandtMatrix {
  long p = 0;
  int nu = 0;
  std::vector<std::vector<Matrix>> blocks;

  Matrix full() const {
    const std::size_t h = blocks.size(), d = blocks[0][0].rows();
    Matrix m(h * d, h * d);
    for (std::size_t i = 0; i < h; ++i)
      for (std::size_t j = 0; j < h; ++j)
        for (std::size_t r = 0; r < d; ++r)
          for (std::size_t c = 0; c < d; ++c) m(i * d + r, j * d + c) = blocks[i][j](r, c);
    return m;
  }
};

/// B_ij(p) = (1/e_j) sum over x in L_ij of normalised norm p of P -> P(conj(x) z x) / (n_i n_j)^nu.
inline BrandtMatrix brandt_matrix(const FormSpace& fs, long p) {
  if (!is_prime(p)) throw UsageError("brandt_matrix: p must be prime");
  if (fs.level() % p == 0) throw UsageError("brandt_matrix: p = " + std::to_string(p) + " divides the level");
  const std::size_t h = fs.classes();
  BrandtMatrix b{p, fs.nu(), std::vector<std::vector<Matrix>>(h, std::vector<Matrix>(h))};
  std::vector<std::pair<std::size_t, std::size_t>> jobs;
  for (std::size_t i = 0; i < h; ++i)
    for (std::size_t j = 0; j < h; ++j) jobs.emplace_back(i, j);
  auto results = parallel_map(jobs.size(), [&](std::size_t k) {
    auto [i, j] = jobs[k];
    const Lattice& l = fs.cross(i, j);
    const Rational s = fs.cross_scale(i, j);
    Matrix acc(fs.block(), fs.block());
    for (const auto& c : short_vectors(l.gram(), p * s)) acc = acc + fs.harm().conj_matrix(l.element(c));
    Rational w = 1 / (fs.class_set().unit_counts[j] * pow_int(s, fs.nu()));
    return w * acc;
  });
  for (std::size_t k = 0; k < jobs.size(); ++k) b.blocks[jobs[k].first][jobs[k].second] = std::move(results[k]);
  return b;
}

inline BrandtMatrix brandt_matrix(const ClassSet& cs, int nu, long p) { return brandt_matrix(FormSpace(cs, nu), p); }

inline AutomorphicForm apply(const BrandtMatrix& b, const FormSpace& fs, const AutomorphicForm& f) {
  return fs.unflatten(b.full() * fs.flatten(f));
}

inline AutomorphicForm operator*(const Rational& s, AutomorphicForm f) {
  for (auto& v : f.values)
    for (auto& x : v) x *= s;
  return f;
}

inline AutomorphicForm operator+(AutomorphicForm f, const AutomorphicForm& g) {
  if (f.nu != g.nu || f.values.size() != g.values.size()) throw UsageError("adding forms of different shape");
  for (std::size_t i = 0; i < f.values.size(); ++i)
    for (std::size_t k = 0; k < f.values[i].size(); ++k) f.values[i][k] += g.values[i][k];
  return f;
}

/// lambda with op phi = lambda phi, or nothing when phi is not an eigenvector (or is zero).
inline std::optional<Rational> eigenvalue_of(const Matrix& op, const FormSpace& fs, const AutomorphicForm& f) {
  Vec v = fs.flatten(f), w = op * v;
  std::optional<Rational> lambda;
  for (std::size_t i = 0; i < v.size(); ++i)
    if (v[i] != 0) {
      lambda = w[i] / v[i];
      break;
    }
  if (!lambda) return std::nullopt;
  for (std::size_t i = 0; i < v.size(); ++i)
    if (w[i] != *lambda * v[i]) return std::nullopt;
  return lambda;
}

/// <phi, psi> = sum_i <<phi(y_i), psi(y_i)>> / e_i.
inline Rational inner_product(const AutomorphicForm& f, const AutomorphicForm& g, const FormSpace& fs) {
  fs.check(f);
  fs.check(g);
  Rational s = 0;
  for (std::size_t i = 0; i < fs.classes(); ++i)
    s += fs.harm().pair(f.values[i], g.values[i]) / fs.class_set().unit_counts[i];
  return s;
}

/// Gram matrix of the inner product on flattened forms.
inline Matrix inner_product_matrix(const FormSpace& fs) {
  const std::size_t d = fs.block();
  Matrix m(fs.dim(), fs.dim());
  for (std::size_t i = 0; i < fs.classes(); ++i)
    for (std::size_t r = 0; r < d; ++r)
      for (std::size_t c = 0; c < d; ++c)
        m(i * d + r, i * d + c) = fs.harm().pairing_matrix()(r, c) / fs.class_set().unit_counts[i];
  return m;
}

/// Matrix of the involution on flattened forms: psi(y_i) = tau(gamma_i) phi(y_j) with I_i P = gamma_i I_j.
/// The transport is checked to be independent of the choice of gamma on unit-invariant values.
inline Matrix atkin_lehner_matrix(const FormSpace& fs, long p) {
  const auto& cs = fs.class_set();
  QuatIdeal pp = two_sided_ideal(cs.order, p);
  const std::size_t h = fs.classes(), d = fs.block();
  Matrix w(fs.dim(), fs.dim());
  for (std::size_t i = 0; i < h; ++i) {
    QuatIdeal ip = ideal_product(cs.ideals[i], pp);
    std::size_t j = h;
    std::vector<Vec> gammas;
    for (std::size_t k = 0; k < h; ++k) {
      gammas = equivalence_elements(ip, cs.ideals[k]);
      if (!gammas.empty()) {
        j = k;
        break;
      }
    }
    if (j == h) throw Error("atkin_lehner: I_i P is in no known class");
    Matrix t = fs.harm().tau_matrix(gammas.front());
    for (std::size_t g = 1; g < gammas.size(); ++g) {
      Matrix t2 = fs.harm().tau_matrix(gammas[g]);
      for (const auto& v : fs.harm().invariants(cs.ideals[j].left_order.units()))
        if (t * v != t2 * v) throw Error("atkin_lehner: transport depends on the choice of gamma");
    }
    for (std::size_t r = 0; r < d; ++r)
      for (std::size_t c = 0; c < d; ++c) w(i * d + r, j * d + c) = t(r, c);
  }
  return w;
}

inline AutomorphicForm atkin_lehner(const AutomorphicForm& f, const FormSpace& fs, long p) {
  return fs.unflatten(atkin_lehner_matrix(fs, p) * fs.flatten(f));
}

namespace detail {

/// Columns of s span a subspace of the ambient space; returns basis vectors of the subspace of
/// span(s) orthogonal (for Gram g) to every vector in others.
inline std::vector<Vec> orthogonal_complement(const std::vector<Vec>& s, const std::vector<Vec>& others, const Matrix& g) {
  if (s.empty()) return {};
  if (others.empty()) return s;
  Matrix cond(others.size(), s.size());
  for (std::size_t r = 0; r < others.size(); ++r) {
    Vec go = g * others[r];
    for (std::size_t c = 0; c < s.size(); ++c) cond(r, c) = dot(go, s[c]);
  }
  std::vector<Vec> out;
  for (const auto& k : nullspace(cond)) {
    Vec v(s.front().size());
    for (std::size_t c = 0; c < s.size(); ++c)
      if (k[c] != 0)
        for (std::size_t t = 0; t < v.size(); ++t) v[t] += k[c] * s[c][t];
    out.push_back(std::move(v));
  }
  return out;
}

/// Forms pulled back from the class set of a superorder R' of R.
inline std::vector<Vec> pullbacks(const FormSpace& fs, const LatticeOrder& sup) {
  const auto& cs = fs.class_set();
  const std::size_t h = fs.classes(), d = fs.block();
  std::vector<QuatIdeal> lifted;
  for (const auto& i : cs.ideals) lifted.push_back(make_ideal(product(i.lattice, sup.lattice)));
  std::vector<std::size_t> rep(h, h);
  std::vector<Vec> gamma(h);
  for (std::size_t i = 0; i < h; ++i) {
    for (std::size_t k = 0; k <= i; ++k) {
      if (rep[k] != k && k != i) continue;
      auto g = equivalence_elements(lifted[i], lifted[k]);
      if (!g.empty()) {
        rep[i] = k;
        gamma[i] = g.front();
        break;
      }
    }
  }
  std::vector<Vec> out;
  for (std::size_t k = 0; k < h; ++k) {
    if (rep[k] != k) continue;
    for (const auto& w : fs.harm().invariants(lifted[k].left_order.units())) {
      Vec v(fs.dim());
      for (std::size_t i = 0; i < h; ++i) {
        if (rep[i] != k) continue;
        Vec t = fs.harm().tau_matrix(gamma[i]) * w;
        for (std::size_t r = 0; r < d; ++r) v[i * d + r] = t[r];
      }
      out.push_back(std::move(v));
    }
  }
  return out;
}

}  // namespace detail

/// The p-essential part of span(subspace): everything when R is maximal at p, otherwise the
/// orthogonal complement of the forms pulled back from the orders of index p above R.
inline std::vector<Vec> essential_part(const std::vector<Vec>& subspace, const FormSpace& fs, long p) {
  if (fs.level() % p != 0) throw UsageError("essential_part: p does not divide the level");
  if (subspace.empty()) return {};
  auto sups = superorders(fs.class_set().order, p);
  if (sups.empty()) return subspace;
  std::vector<Vec> pulled;
  for (const auto& s : sups)
    for (auto& v : detail::pullbacks(fs, s)) pulled.push_back(std::move(v));
  return detail::orthogonal_complement(subspace, pulled, inner_product_matrix(fs));
}

/// A simultaneous invariant subspace of the Hecke operators and involutions.
struct EigenBlock {
  std::vector<Vec> basis;                ///< flattened forms
  std::map<long, UPoly> charpolys;       ///< irreducible factor of each Brandt operator on the block
  std::map<long, Rational> eigenvalues;  ///< Brandt eigenvalues (one-dimensional blocks only)
  std::map<long, Rational> involutions;  ///< Atkin-Lehner eigenvalues
  bool is_eigenform() const { return basis.size() == 1; }
};

namespace detail {

inline Vec primitive_integral(Vec v) {
  Integer den = 1, g = 0;
  for (const auto& x : v) mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), x.get_den_mpz_t());
  for (auto& x : v) x *= den;
  for (const auto& x : v) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), x.get_num_mpz_t());
  if (g == 0) return v;
  Rational s(1, g);
  for (const auto& x : v)
    if (x != 0) {
      if (sgn(x) < 0) s = -s;
      break;
    }
  for (auto& x : v) x *= s;
  return v;
}

inline std::vector<Vec> matrix_columns(const Matrix& m) {
  std::vector<Vec> out;
  for (std::size_t c = 0; c < m.cols(); ++c) out.push_back(m.col(c));
  return out;
}

}  // namespace detail

/// Splits the unit-invariant forms into simultaneous rational invariant subspaces of the Brandt
/// matrices at good primes and the involutions at ramified primes dividing the level.
inline std::vector<EigenBlock> eigenforms(const FormSpace& fs, const std::vector<long>& primes) {
  const auto& vb = fs.invariant_basis();
  if (vb.empty()) return {};
  const Matrix vmat = Matrix::from_columns(vb);
  struct Op {
    long p;
    bool involution;
    Matrix m;
  };
  std::vector<Op> ops;
  for (long p : primes) ops.push_back({p, false, brandt_matrix(fs, p).full()});
  const long level = fs.level();
  for (long q = 2; q <= level; ++q)
    if (level % q == 0 && is_prime(q)) ops.push_back({q, true, atkin_lehner_matrix(fs, q)});

  struct Piece {
    Matrix basis;  // columns in invariant coordinates
    std::map<long, UPoly> charpolys;
    std::map<long, UPoly> involution_polys;
  };
  std::vector<Piece> pieces{{Matrix::identity(vb.size()), {}, {}}};
  for (const auto& op : ops) {
    Matrix restricted = solve(vmat, op.m * vmat);
    std::vector<Piece> next;
    for (const auto& pc : pieces) {
      Matrix local = solve(pc.basis, restricted * pc.basis);
      std::size_t covered = 0;
      for (const auto& [f, mult] : factor(charpoly_upoly(local))) {
        auto ker = nullspace(f.evaluate(local));
        if (ker.empty()) continue;
        covered += ker.size();
        Piece sub{pc.basis * Matrix::from_columns(ker), pc.charpolys, pc.involution_polys};
        (op.involution ? sub.involution_polys : sub.charpolys)[op.p] = f;
        next.push_back(std::move(sub));
      }
      if (covered != pc.basis.cols()) throw Error("eigenforms: operator is not semisimple on an invariant block");
    }
    pieces = std::move(next);
  }
  std::vector<EigenBlock> out;
  for (const auto& pc : pieces) {
    EigenBlock b;
    for (const auto& c : detail::matrix_columns(vmat * pc.basis)) b.basis.push_back(c);
    if (b.basis.size() == 1) b.basis[0] = detail::primitive_integral(b.basis[0]);
    b.charpolys = pc.charpolys;
    for (const auto& [p, f] : pc.charpolys)
      if (f.degree() == 1) b.eigenvalues[p] = -f.coeff(0);
    for (const auto& [p, f] : pc.involution_polys)
      if (f.degree() == 1) b.involutions[p] = -f.coeff(0);
    out.push_back(std::move(b));
  }
  return out;
}

/// Refuses a lift when both forms fail to be p-essential at some p dividing the level.
inline void check_lift_admissible(const FormSpace& fs1, const AutomorphicForm& f1, const FormSpace& fs2,
                                  const AutomorphicForm& f2) {
  const long level = fs1.level();
  for (long q = 2; q <= level; ++q) {
    if (level % q != 0 || !is_prime(q)) continue;
    auto in_span = [&](const FormSpace& fs, const AutomorphicForm& f) {
      auto ess = essential_part(fs.invariant_basis(), fs, q);
      std::vector<Vec> all = ess;
      all.push_back(fs.flatten(f));
      return rank(Matrix::from_columns(all)) == rank(Matrix::from_columns(ess.empty() ? std::vector<Vec>{Vec(fs.dim())} : ess));
    };
    if (!in_span(fs1, f1) && !in_span(fs2, f2))
      throw UsageError("lift refused: neither form is essential at p = " + std::to_string(q));
  }
}

}  // namespace yoshida

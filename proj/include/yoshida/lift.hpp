#pragma once

#include <algorithm>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "yoshida/brandt.hpp"
#include "yoshida/core/error.hpp"
#include "yoshida/core/parallel.hpp"
#include "yoshida/core/polynomial.hpp"
#include "yoshida/harmonic.hpp"
#include "yoshida/quatcore.hpp"

namespace yoshida {

/// The half-integral matrix [[a, b/2], [b/2, c]].
struct BinaryForm {
  long a = 0, b = 0, c = 0;

  long disc() const { return 4 * a * c - b * b; }
  bool singular() const { return disc() == 0; }
  /// Fixed by a determinant -1 substitution; only meaningful on reduced forms.
  bool ambiguous() const { return b == 0 || a == b || a == c; }

  /// Ordered by (disc, a, b); c is determined by these for a > 0.
  friend bool operator<(const BinaryForm& x, const BinaryForm& y) {
    if (x.disc() != y.disc()) return x.disc() < y.disc();
    if (x.a != y.a) return x.a < y.a;
    if (x.b != y.b) return x.b < y.b;
    return x.c < y.c;
  }
  friend bool operator==(const BinaryForm& x, const BinaryForm& y) { return x.a == y.a && x.b == y.b && x.c == y.c; }
  std::string to_string() const {
    return "[" + std::to_string(a) + "," + std::to_string(b) + "," + std::to_string(c) + "]";
  }
};

struct ReducedForm {
  BinaryForm form;
  int sign;  ///< det of the unimodular U with form = T[U]
};

/// Gauss reduction to 0 <= b <= a <= c; singular forms end at [0, 0, c].
inline ReducedForm reduce_form(BinaryForm t) {
  if (t.a < 0 || t.c < 0 || t.disc() < 0) throw UsageError("reduce_form: form " + t.to_string() + " is not positive semidefinite");
  int s = 1;
  auto [a, b, c] = t;
  for (;;) {
    if (a > c) {
      std::swap(a, c);
      s = -s;
      continue;
    }
    if (a == 0) break;  // then b = 0 by semidefiniteness
    if (b > a || -b > a) {
      // nearest integer to b / 2a, ties away from zero
      long q = b >= 0 ? (b + a) / (2 * a) : -((-b + a) / (2 * a));
      c = c - q * b + q * q * a;
      b = b - 2 * q * a;
      continue;
    }
    break;
  }
  if (b < 0) {
    b = -b;
    s = -s;
  }
  return {{a, b, c}, s};
}

inline bool is_reduced(const BinaryForm& t) { return 0 <= t.b && t.b <= t.a && t.a <= t.c; }

/// Definite reduced forms with disc <= bound, and singular [0, 0, c] with c <= (bound + 1) / 4.
inline bool in_coverage(const BinaryForm& reduced, long bound) {
  if (reduced.singular()) return reduced.c <= (bound + 1) / 4;
  return reduced.disc() <= bound;
}

/// Reduced forms covered by a bound, in (disc, a, b) order.
inline std::vector<BinaryForm> covered_forms(long bound) {
  std::vector<BinaryForm> out;
  for (long c = 0; c <= (bound + 1) / 4; ++c) out.push_back({0, 0, c});
  for (long a = 1; 3 * a * a <= bound; ++a)
    for (long b = 0; b <= a; ++b)
      for (long c = a; 4 * a * c - b * b <= bound; ++c) out.push_back({a, b, c});
  std::sort(out.begin(), out.end());
  return out;
}

/// Degree-2 scalar-weight Fourier expansion, stored on reduced forms only (zeros omitted).
struct FourierExpansionSiegel2 {
  long weight = 0;
  long level = 0;
  long bound = 0;
  std::map<BinaryForm, Rational> entries;

  /// a(T) for any semidefinite T, via a(T[U]) = det(U)^k a(T). In odd weight that rule forces
  /// a(T) = 0 on ambiguous forms, whatever is stored there.
  Rational operator()(const BinaryForm& t) const {
    auto r = reduce_form(t);
    if (!in_coverage(r.form, bound))
      throw TruncationError("coefficient " + t.to_string() + " lies outside the expansion bound " + std::to_string(bound));
    if (weight % 2 != 0 && r.form.ambiguous()) return 0;
    auto it = entries.find(r.form);
    if (it == entries.end()) return 0;
    return (weight % 2 != 0 && r.sign < 0) ? Rational(-it->second) : it->second;
  }

  void set(const BinaryForm& reduced, const Rational& v) {
    if (!is_reduced(reduced)) throw UsageError("expansion entries must be reduced forms");
    if (v == 0)
      entries.erase(reduced);
    else
      entries[reduced] = v;
  }

  bool is_zero() const { return entries.empty(); }

  friend bool operator==(const FourierExpansionSiegel2& x, const FourierExpansionSiegel2& y) {
    return x.weight == y.weight && x.level == y.level && x.bound == y.bound && x.entries == y.entries;
  }
};

inline FourierExpansionSiegel2 operator*(const Rational& s, FourierExpansionSiegel2 f) {
  if (s == 0) f.entries.clear();
  for (auto& [t, v] : f.entries) v *= s;
  return f;
}

inline FourierExpansionSiegel2 operator+(FourierExpansionSiegel2 f, const FourierExpansionSiegel2& g) {
  if (f.weight != g.weight || f.level != g.level) throw UsageError("adding expansions of different weight or level");
  f.bound = std::min(f.bound, g.bound);
  std::map<BinaryForm, Rational> out;
  for (const auto& [t, v] : f.entries)
    if (in_coverage(t, f.bound)) out[t] += v;
  for (const auto& [t, v] : g.entries)
    if (in_coverage(t, f.bound)) out[t] += v;
  f.entries.clear();
  for (auto& [t, v] : out)
    if (v != 0) f.entries.emplace(t, v);
  return f;
}

/// Elliptic q-expansion with coefficients for 0 <= m <= bound.
struct QExpansion {
  long weight = 0;
  long level = 0;
  long bound = 0;
  std::vector<Rational> coefficients;

  const Rational& operator[](long m) const {
    if (m < 0 || m > bound) throw TruncationError("q-coefficient " + std::to_string(m) + " is outside the bound");
    return coefficients[static_cast<std::size_t>(m)];
  }
  bool is_zero() const {
    return std::all_of(coefficients.begin(), coefficients.end(), [](const Rational& c) { return c == 0; });
  }
};

namespace detail {

/// Integer Gram matrix, rejecting non-integral or odd-diagonal entries.
inline std::vector<std::vector<long>> integral_gram(const Matrix& g) {
  std::vector<std::vector<long>> out(4, std::vector<long>(4));
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) {
      if (!is_integer(g(i, j))) throw UsageError("theta series needs an integral norm form");
      out[i][j] = to_long(g(i, j));
    }
  for (std::size_t i = 0; i < 4; ++i)
    if (out[i][i] % 2 != 0) throw UsageError("theta series needs an even Gram matrix");
  return out;
}

inline __int128 checked_add(__int128 x, __int128 y) {
  __int128 r;
  if (__builtin_add_overflow(x, y, &r)) throw Error("theta series: integer overflow in accumulation");
  return r;
}
inline __int128 checked_mul(__int128 x, __int128 y) {
  __int128 r;
  if (__builtin_mul_overflow(x, y, &r)) throw Error("theta series: integer overflow in evaluation");
  return r;
}

inline Rational from_int128(__int128 v) {
  bool neg = v < 0;
  unsigned __int128 u = neg ? static_cast<unsigned __int128>(-(v + 1)) + 1 : static_cast<unsigned __int128>(v);
  Integer z = static_cast<unsigned long>(u >> 64);
  z <<= 64;
  z += static_cast<unsigned long>(u & ~0UL);
  return neg ? Rational(-z) : Rational(z);
}

/// A polynomial scaled to integer coefficients: value = (sum c_e x^e) / den.
struct IntPoly {
  std::vector<std::pair<std::vector<int>, __int128>> terms;
  Integer den = 1;

  static IntPoly from(const Poly& p) {
    IntPoly out;
    for (const auto& [e, c] : p.terms()) mpz_lcm(out.den.get_mpz_t(), out.den.get_mpz_t(), c.get_den_mpz_t());
    for (const auto& [e, c] : p.terms()) {
      Rational v = c * out.den;
      if (!v.get_num().fits_slong_p()) throw Error("theta series: polynomial coefficient too large");
      out.terms.emplace_back(e, static_cast<__int128>(v.get_num().get_si()));
    }
    return out;
  }
  __int128 eval(const long* x) const {
    __int128 s = 0;
    for (const auto& [e, c] : terms) {
      __int128 t = c;
      for (std::size_t i = 0; i < e.size(); ++i)
        for (int k = 0; k < e[i]; ++k) t = checked_mul(t, x[i]);
      s = checked_add(s, t);
    }
    return s;
  }
};

/// Substitutes x1 into an 8-variable polynomial, leaving a polynomial in x2.
inline Poly partial_first(const Poly& p, const IntVec& x1) {
  Poly out(4);
  for (const auto& [e, c] : p.terms()) {
    Rational v = c;
    for (std::size_t i = 0; i < 4; ++i)
      for (int k = 0; k < e[i]; ++k) v *= x1[i];
    if (v != 0) out.add_term(Exponent(e.begin() + 4, e.end()), v);
  }
  return out;
}

}  // namespace detail

/// a(T) for one lattice: sum of P(x1, x2) over n(x1) = a, n(x2) = c, tr(x1 conj(x2)) = b.
/// gram is the (normalised) norm form in lattice coordinates; P is in the 8 lattice coordinates.
inline Rational theta2_coefficient(const Matrix& gram, const Poly& p, const BinaryForm& t) {
  if (p.nvars() != 8) throw UsageError("theta2_coefficient: polynomial must have 8 variables");
  if (t.a < 0 || t.c < 0 || t.disc() < 0) throw UsageError("theta2_coefficient: T is not positive semidefinite");
  auto first = short_vectors(gram, t.a);
  auto second = short_vectors(gram, t.c);
  Rational s = 0;
  for (const auto& x1 : first) {
    Vec g1(4);
    for (std::size_t j = 0; j < 4; ++j)
      for (std::size_t i = 0; i < 4; ++i) g1[j] += gram(i, j) * x1[i];
    Poly q = detail::partial_first(p, x1);
    for (const auto& x2 : second) {
      Rational b = 0;
      for (std::size_t j = 0; j < 4; ++j) b += g1[j] * x2[j];
      if (b != t.b) continue;
      Vec v(x2.begin(), x2.end());
      s += q.evaluate(v);
    }
  }
  return s;
}

/// Coefficients at every covered reduced form of the degree-2 theta series of (gram, P).
/// Work is split over x1 and merged exactly, so the result is independent of the thread count.
inline std::map<BinaryForm, Rational> theta2_series(const Matrix& gram, const Poly& p, long bound) {
  if (p.nvars() != 8) throw UsageError("theta2_series: polynomial must have 8 variables");
  if (bound < 0) throw UsageError("theta2_series: negative bound");
  const auto g = detail::integral_gram(gram);
  const long cmax = (bound + 1) / 4;
  const auto vecs = short_vectors_upto(gram, cmax);
  // vectors grouped by norm
  std::vector<std::size_t> start(static_cast<std::size_t>(cmax) + 2, vecs.size());
  for (std::size_t i = vecs.size(); i-- > 0;) start[to_long(vecs[i].norm)] = i;
  for (long m = cmax; m >= 0; --m) start[m] = std::min(start[m], start[m + 1]);

  const Poly at_zero = detail::partial_first(p, IntVec(4, 0));
  std::map<BinaryForm, Rational> out;
  // singular forms [0, 0, c]: x1 = 0
  if (!at_zero.is_zero()) {
    auto ip = detail::IntPoly::from(at_zero);
    for (long c = 0; c <= cmax; ++c) {
      __int128 s = 0;
      for (std::size_t k = start[c]; k < start[c + 1]; ++k) s = detail::checked_add(s, ip.eval(vecs[k].v.data()));
      if (s != 0) out[{0, 0, c}] = detail::from_int128(s) / ip.den;
    }
  }

  const long amax = [&] {
    long a = 0;
    while (3 * (a + 1) * (a + 1) <= bound) ++a;
    return a;
  }();
  if (amax == 0) return out;
  // slot (a, b, c) -> offset[a] + (c - a) * (a + 1) + b
  std::vector<std::size_t> offset(static_cast<std::size_t>(amax) + 2, 0);
  std::vector<long> c_top(static_cast<std::size_t>(amax) + 1, 0);
  for (long a = 1; a <= amax; ++a) {
    c_top[a] = (bound + a * a) / (4 * a);
    offset[a + 1] = offset[a] + static_cast<std::size_t>((c_top[a] - a + 1) * (a + 1));
  }
  const std::size_t nslots = offset[amax + 1];
  const std::size_t first_vec = start[1], last_vec = start[amax + 1];
  const std::size_t nchunks = std::max<std::size_t>(1, std::min<std::size_t>(64, last_vec - first_vec));
  auto partials = parallel_map(nchunks, [&](std::size_t chunk) {
    std::vector<__int128> acc(nslots, 0);
    const std::size_t lo = first_vec + (last_vec - first_vec) * chunk / nchunks;
    const std::size_t hi = first_vec + (last_vec - first_vec) * (chunk + 1) / nchunks;
    for (std::size_t k = lo; k < hi; ++k) {
      const auto& x1 = vecs[k].v;
      const long a = to_long(vecs[k].norm);
      long w[4] = {0, 0, 0, 0};
      for (std::size_t j = 0; j < 4; ++j)
        for (std::size_t i = 0; i < 4; ++i) w[j] += g[i][j] * x1[i];
      auto ip = detail::IntPoly::from(detail::partial_first(p, x1));
      if (ip.terms.empty()) continue;
      if (ip.den != 1) throw Error("theta2_series: lift polynomial must have integral values scaled beforehand");
      for (long c = a; c <= c_top[a]; ++c) {
        for (std::size_t m = start[c]; m < start[c + 1]; ++m) {
          const long* x2 = vecs[m].v.data();
          const long b = w[0] * x2[0] + w[1] * x2[1] + w[2] * x2[2] + w[3] * x2[3];
          if (b < 0 || b > a || 4 * a * c - b * b > bound) continue;
          auto& slot = acc[offset[a] + static_cast<std::size_t>((c - a) * (a + 1) + b)];
          slot = detail::checked_add(slot, ip.eval(x2));
        }
      }
    }
    return acc;
  });
  std::vector<__int128> total(nslots, 0);
  for (const auto& part : partials)
    for (std::size_t i = 0; i < nslots; ++i) total[i] = detail::checked_add(total[i], part[i]);
  for (long a = 1; a <= amax; ++a)
    for (long c = a; c <= c_top[a]; ++c)
      for (long b = 0; b <= a; ++b) {
        __int128 v = total[offset[a] + static_cast<std::size_t>((c - a) * (a + 1) + b)];
        if (v != 0) out[{a, b, c}] = detail::from_int128(v);
      }
  return out;
}

/// Theta series of one lattice with a rational-coefficient polynomial: scales P to integer
/// coefficients, sums, and rescales.
inline std::map<BinaryForm, Rational> theta2_series_rational(const Matrix& gram, const Poly& p, long bound) {
  auto ip = detail::IntPoly::from(p);
  Poly scaled = Rational(ip.den) * p;
  auto out = theta2_series(gram, scaled, bound);
  for (auto& [t, v] : out) v /= ip.den;
  return out;
}

/// Degree-1 theta series: m -> sum over n(x) = m of P(x), for m <= bound.
inline std::vector<Rational> theta1_series(const Matrix& gram, const Poly& p, long bound) {
  if (p.nvars() != 4) throw UsageError("theta1_series: polynomial must have 4 variables");
  auto ip = detail::IntPoly::from(p);
  std::vector<__int128> acc(static_cast<std::size_t>(bound) + 1, 0);
  for (const auto& sv : short_vectors_upto(gram, bound)) {
    auto m = static_cast<std::size_t>(to_long(sv.norm));
    if (!is_integer(sv.norm)) throw UsageError("theta1_series: norms must be integral");
    acc[m] = detail::checked_add(acc[m], ip.eval(sv.v.data()));
  }
  std::vector<Rational> out;
  for (auto v : acc) out.push_back(detail::from_int128(v) / ip.den);
  return out;
}

/// Bilinear polynomial a^t M b in 8 variables.
inline Poly bilinear_poly(const Matrix& m) {
  Poly p(8);
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j)
      if (m(i, j) != 0) p += m(i, j) * (Poly::variable(8, i) * Poly::variable(8, 4 + j));
  return p;
}

/// One weighted lattice term of a degree-2 lift: scale * theta(gram, P).
struct LiftTerm {
  Matrix gram;
  Poly poly;
  Rational scale = 1;
};

inline FourierExpansionSiegel2 assemble_lift(const std::vector<LiftTerm>& terms, long weight, long level, long bound) {
  FourierExpansionSiegel2 f{weight, level, bound, {}};
  std::map<BinaryForm, Rational> acc;
  for (const auto& t : terms) {
    if (t.scale == 0 || t.poly.is_zero()) continue;
    for (const auto& [form, v] : theta2_series_rational(t.gram, t.poly, bound)) acc[form] += t.scale * v;
  }
  for (auto& [form, v] : acc)
    if (v != 0) f.entries.emplace(form, v);
  return f;
}

/// The lattice terms of Y2(phi1, phi2): P_{phi1(y_i)} on L_ij with weight phi2(y_j) / (e_i e_j).
inline std::vector<LiftTerm> yoshida2_terms(const FormSpace& fs1, const AutomorphicForm& phi1, const FormSpace& fs0,
                                            const AutomorphicForm& phi2) {
  if (fs0.nu() != 0) throw UsageError("yoshida2: vector-valued lifts with nu2 > 0 are not supported");
  fs1.check(phi1);
  fs0.check(phi2);
  if (fs1.classes() != fs0.classes()) throw UsageError("yoshida2: forms live on different class sets");
  const auto& cs = fs1.class_set();
  const std::size_t h = fs1.classes();
  const int nu = fs1.nu();
  std::vector<LiftTerm> terms;
  for (std::size_t i = 0; i < h; ++i) {
    const Vec& v = phi1.values[i];
    if (std::all_of(v.begin(), v.end(), [](const Rational& x) { return x == 0; })) continue;
    Poly lifted = lift_poly_deg2(fs1.harm().poly(v));
    for (std::size_t j = 0; j < h; ++j) {
      Rational w = phi2.values[j][0] * fs0.harm().basis()[0].poly.coeff(Exponent(3, 0));
      if (w == 0) continue;
      const Lattice& l = fs1.cross(i, j);
      const Rational s = fs1.cross_scale(i, j);
      Poly p = to_lattice_coords(lifted, {&l, &l});
      terms.push_back({fs1.normalized_gram(i, j), p,
                       w / (Rational(cs.unit_counts[i] * cs.unit_counts[j]) * pow_int(s, nu))});
    }
  }
  return terms;
}

/// Y2(phi1, phi2) of weight nu1 + 2, from the lift polynomials of the harmonic module.
inline FourierExpansionSiegel2 yoshida2(const FormSpace& fs1, const AutomorphicForm& phi1, const FormSpace& fs0,
                                        const AutomorphicForm& phi2, long bound) {
  return assemble_lift(yoshida2_terms(fs1, phi1, fs0, phi2), fs1.nu() + 2, fs1.level(), bound);
}

/// Y1(phi1, phi2) of weight 2 + 2 nu.
inline QExpansion yoshida1(const FormSpace& fs, const AutomorphicForm& phi1, const AutomorphicForm& phi2, long bound) {
  if (phi1.nu != phi2.nu) throw UsageError("yoshida1: forms must have the same degree");
  fs.check(phi1);
  fs.check(phi2);
  const auto& cs = fs.class_set();
  const int nu = fs.nu();
  QExpansion q{2 + 2 * nu, fs.level(), bound, std::vector<Rational>(static_cast<std::size_t>(bound) + 1)};
  for (std::size_t i = 0; i < fs.classes(); ++i)
    for (std::size_t j = 0; j < fs.classes(); ++j) {
      Poly p = lift_poly_deg1(fs.harm().poly(phi1.values[i]), fs.harm().poly(phi2.values[j]));
      if (p.is_zero()) continue;
      const Lattice& l = fs.cross(i, j);
      Poly pl = to_lattice_coords(p, {&l});
      Rational w = 1 / (Rational(cs.unit_counts[i] * cs.unit_counts[j]) * pow_int(fs.cross_scale(i, j), nu));
      auto series = theta1_series(fs.normalized_gram(i, j), pl, bound);
      for (long m = 0; m <= bound; ++m) q.coefficients[m] += w * series[m];
    }
  return q;
}

/// m -> a([m, 0, 0]) over the singular range of the bound.
inline QExpansion phi_operator(const FourierExpansionSiegel2& f) {
  const long top = (f.bound + 1) / 4;
  QExpansion q{f.weight, f.level, top, {}};
  for (long m = 0; m <= top; ++m) q.coefficients.push_back(f({m, 0, 0}));
  return q;
}

/// Cusp form up to the bound: the Phi image and every singular coefficient vanish.
inline bool is_cuspidal(const FourierExpansionSiegel2& f) {
  if (!phi_operator(f).is_zero()) return false;
  for (const auto& [t, v] : f.entries)
    if (t.singular()) return false;
  return true;
}

}  // namespace yoshida

#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "yoshida/core/error.hpp"
#include "yoshida/core/modp.hpp"
#include "yoshida/quatcore/lattice.hpp"
#include "yoshida/quatcore/short_vectors.hpp"

namespace yoshida {

/// A lattice verified to be an order, with its number of norm-one elements.
struct LatticeOrder {
  Lattice lattice;
  long unit_count = 0;

  const AlgebraPtr& algebra() const { return lattice.algebra(); }
  const Matrix& gram() const { return lattice.gram(); }

  /// Elements of norm one, in lexicographic order of lattice coordinates.
  std::vector<Vec> units() const {
    std::vector<Vec> out;
    for (const auto& c : short_vectors(lattice.gram(), 1)) out.push_back(lattice.element(c));
    return out;
  }

  friend bool operator==(const LatticeOrder& a, const LatticeOrder& b) { return a.lattice == b.lattice; }
};

/// Verifies the order axioms; the error names the first basis pair whose product escapes.
inline LatticeOrder make_order(const Lattice& l) {
  const auto& a = *l.algebra();
  if (!l.contains(a.unit())) throw UsageError("lattice does not contain 1");
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j)
      if (!l.contains(a.mul(l.basis(i), l.basis(j))))
        throw UsageError("lattice is not closed under multiplication: b" + std::to_string(i) + " * b" +
                         std::to_string(j) + " is not in the lattice");
  for (std::size_t i = 0; i < 4; ++i)
    if (!is_integer(a.trace(l.basis(i))) || !is_integer(a.norm(l.basis(i))))
      throw UsageError("order element b" + std::to_string(i) + " has non-integral trace or norm");
  return {l, static_cast<long>(short_vectors(l.gram(), 1).size())};
}

/// {x : x L subset L} and {x : L x subset L}.
inline std::pair<LatticeOrder, LatticeOrder> left_right_order(const Lattice& l) {
  const auto& a = *l.algebra();
  std::vector<Lattice> left_parts, right_parts;
  for (std::size_t j = 0; j < 4; ++j) {
    Vec inv = a.inverse(l.basis(j));
    left_parts.push_back(l.right_multiplied(inv));
    right_parts.push_back(l.left_multiplied(inv));
  }
  return {make_order(intersection(left_parts)), make_order(intersection(right_parts))};
}

/// A lattice together with its left and right orders and reduced norm.
struct QuatIdeal {
  Lattice lattice;
  LatticeOrder left_order;
  LatticeOrder right_order;
  Rational reduced_norm;

  const AlgebraPtr& algebra() const { return lattice.algebra(); }
  const Matrix& gram() const { return lattice.gram(); }
};

/// n(I) with n(I)^4 = det gram(I) / det gram(O_R(I)).
inline QuatIdeal make_ideal(const Lattice& l) {
  auto [left, right] = left_right_order(l);
  Rational ratio = l.gram_det() / right.lattice.gram_det();
  Rational n;
  try {
    n = exact_root(ratio, 4);
  } catch (const UsageError&) {
    throw UsageError("lattice is not a locally principal ideal of its right order (index " + to_string(ratio) +
                     " is not a fourth power)");
  }
  return {l, std::move(left), std::move(right), n};
}

inline QuatIdeal unit_ideal(const LatticeOrder& r) { return {r.lattice, r, r, Rational(1)}; }

/// Ideal product as a lattice, with its orders recomputed.
inline QuatIdeal ideal_product(const QuatIdeal& i, const QuatIdeal& j) { return make_ideal(product(i.lattice, j.lattice)); }

/// Every gamma with I = gamma * J, found as alpha / n(J) for alpha in I * conj(J) of norm n(I) n(J).
inline std::vector<Vec> equivalence_elements(const QuatIdeal& i, const QuatIdeal& j) {
  if (!(i.right_order == j.right_order)) throw UsageError("ideal_equivalent: ideals have different right orders");
  Lattice m = product(i.lattice, j.lattice.conjugate());
  Rational target = i.reduced_norm * j.reduced_norm;
  std::vector<Vec> out;
  for (const auto& c : short_vectors(m.gram(), target)) {
    Vec g = m.element(c);
    for (auto& v : g) v /= j.reduced_norm;
    out.push_back(std::move(g));
  }
  return out;
}

/// True iff I = gamma * J for some gamma in the algebra.
inline bool ideal_equivalent(const QuatIdeal& i, const QuatIdeal& j) {
  auto gammas = equivalence_elements(i, j);
  if (gammas.empty()) return false;
  if (!(j.lattice.left_multiplied(gammas.front()) == i.lattice))
    throw Error("ideal_equivalent: norm witness does not generate the quotient ideal");
  return true;
}

/// Level of an order: sqrt(det gram), the product of the discriminant and the Eichler level.
inline Integer order_level(const LatticeOrder& r) {
  Rational n = exact_root(r.lattice.gram_det(), 2);
  if (!is_integer(n)) throw UsageError("order has non-integral discriminant");
  return n.get_num();
}

namespace detail {

/// Matrices, mod p, of the right action of basis r_k on I / pI in I's basis.
inline std::vector<std::vector<modp::Row>> action_mod_p(const Lattice& i, const Lattice& r, long p, bool right) {
  const auto& a = *i.algebra();
  std::vector<std::vector<modp::Row>> mats;
  for (std::size_t k = 0; k < 4; ++k) {
    std::vector<modp::Row> m;
    for (std::size_t row = 0; row < 4; ++row) {
      Vec prod = right ? a.mul(i.basis(row), r.basis(k)) : a.mul(r.basis(k), i.basis(row));
      Vec c = i.coords(prod);
      modp::Row out(4);
      for (std::size_t t = 0; t < 4; ++t) {
        if (!is_integer(c[t])) throw UsageError("lattice is not stable under the order");
        out[t] = mod_floor(to_long(Integer(c[t].get_num() % p)), p);
      }
      m.push_back(out);
    }
    mats.push_back(m);
  }
  return mats;
}

inline bool stable(const std::vector<modp::Row>& w, const std::vector<std::size_t>& piv,
                   const std::vector<std::vector<modp::Row>>& mats, long p) {
  for (const auto& m : mats)
    for (const auto& row : w) {
      modp::Row img(4, 0);
      for (std::size_t s = 0; s < 4; ++s)
        if (row[s])
          for (std::size_t t = 0; t < 4; ++t) img[t] += row[s] * m[s][t];
      if (!modp::in_span(w, piv, img, p)) return false;
    }
  return true;
}

inline Lattice lift_subspace(const Lattice& i, const std::vector<modp::Row>& w, long p) {
  std::vector<Vec> gens;
  for (std::size_t k = 0; k < 4; ++k) {
    Vec b = i.basis(k);
    for (auto& v : b) v *= p;
    gens.push_back(b);
  }
  for (const auto& row : w) gens.push_back(i.element(row));
  return Lattice::span(i.algebra(), gens);
}

inline std::vector<std::size_t> pivots_of(const std::vector<modp::Row>& w) {
  std::vector<std::size_t> piv;
  for (const auto& r : w) {
    std::size_t c = 0;
    while (r[c] == 0) ++c;
    piv.push_back(c);
  }
  return piv;
}

}  // namespace detail

/// Right R-ideals J with pI subset J subset I of index p^2 (the p-neighbours of I).
inline std::vector<QuatIdeal> neighbours(const QuatIdeal& i, long p) {
  auto mats = detail::action_mod_p(i.lattice, i.right_order.lattice, p, true);
  std::vector<QuatIdeal> out;
  for (const auto& w : modp::subspaces(4, 2, p)) {
    if (!detail::stable(w, detail::pivots_of(w), mats, p)) continue;
    out.push_back(make_ideal(detail::lift_subspace(i.lattice, w, p)));
  }
  return out;
}

/// Representatives I_1 = R, I_2, ... of the right ideal classes of R and their unit counts.
struct ClassSet {
  LatticeOrder order;
  std::vector<QuatIdeal> ideals;
  std::vector<long> unit_counts;  ///< units of the left order of each representative

  std::size_t size() const { return ideals.size(); }
  Rational mass() const {
    Rational m = 0;
    for (long e : unit_counts) m += make_rational(1, e);
    return m;
  }
  /// Index of the representative equivalent to I.
  std::size_t class_of(const QuatIdeal& i) const {
    for (std::size_t k = 0; k < ideals.size(); ++k)
      if (ideal_equivalent(i, ideals[k])) return k;
    throw Error("ideal is not equivalent to any class representative");
  }
};

/// Breadth-first search over p_seed-neighbours, one round at a time, until a round adds no class.
inline ClassSet class_set(const LatticeOrder& r, long p_seed) {
  if (!is_prime(p_seed)) throw UsageError("class_set: seed must be prime");
  if (order_level(r) % p_seed == 0)
    throw UsageError("class_set: seed prime divides the level; the order is not maximal there");
  ClassSet cs{r, {unit_ideal(r)}, {}};
  std::vector<std::size_t> frontier{0};
  while (!frontier.empty()) {
    std::vector<std::size_t> next;
    for (std::size_t idx : frontier) {
      auto nb = neighbours(cs.ideals[idx], p_seed);
      if (static_cast<long>(nb.size()) != p_seed + 1)
        throw UsageError("class_set: order is not maximal at the seed prime (" + std::to_string(nb.size()) +
                         " neighbours)");
      for (auto& j : nb) {
        bool seen = false;
        for (const auto& k : cs.ideals)
          if (ideal_equivalent(j, k)) {
            seen = true;
            break;
          }
        if (!seen) {
          cs.ideals.push_back(std::move(j));
          next.push_back(cs.ideals.size() - 1);
        }
      }
    }
    frontier = std::move(next);
  }
  for (const auto& i : cs.ideals) cs.unit_counts.push_back(i.left_order.unit_count);
  return cs;
}

/// The unique integral two-sided R-ideal of reduced norm p, for p dividing the level.
inline QuatIdeal two_sided_ideal(const LatticeOrder& r, long p) {
  if (!is_prime(p)) throw UsageError("two_sided_ideal: p must be prime");
  if (order_level(r) % p != 0)
    throw UsageError("two_sided_ideal: p = " + std::to_string(p) + " does not divide the level");
  auto right = detail::action_mod_p(r.lattice, r.lattice, p, true);
  auto left = detail::action_mod_p(r.lattice, r.lattice, p, false);
  std::optional<Lattice> found;
  for (const auto& w : modp::subspaces(4, 2, p)) {
    auto piv = detail::pivots_of(w);
    if (!detail::stable(w, piv, right, p) || !detail::stable(w, piv, left, p)) continue;
    Lattice j = detail::lift_subspace(r.lattice, w, p);
    // Norm p means every element norm is divisible by p.
    bool integral_norm = true;
    for (std::size_t k = 0; k < 4 && integral_norm; ++k)
      for (std::size_t t = k; t < 4 && integral_norm; ++t) {
        Rational b = j.gram()(k, t) / (k == t ? 2 * p : p);
        integral_norm = is_integer(b);
      }
    if (!integral_norm) continue;
    if (found) throw UsageError("two_sided_ideal: two-sided ideal of norm p is not unique");
    found = j;
  }
  if (!found) throw UsageError("two_sided_ideal: no two-sided ideal of norm " + std::to_string(p));
  return make_ideal(*found);
}

/// Orders R' containing R with [R' : R] = p.
inline std::vector<LatticeOrder> superorders(const LatticeOrder& r, long p) {
  std::vector<LatticeOrder> out;
  for (const auto& w : modp::subspaces(4, 1, p)) {
    Vec x = r.lattice.element(w.front());
    for (auto& v : x) v /= p;
    auto gens = r.lattice.basis_vectors();
    gens.push_back(x);
    Lattice l = Lattice::span(r.algebra(), gens);
    try {
      out.push_back(make_order(l));
    } catch (const UsageError&) {
    }
  }
  return out;
}

/// Class representatives whose left orders are pairwise non-conjugate, one per type.
/// O_L(I_j) and O_L(I_i) are conjugate iff the connecting ideal I_j conj(I_i), times some product of
/// the two-sided ideals of O_L(I_i) at primes dividing the level, is principal.
inline std::vector<std::size_t> order_types(const ClassSet& cs) {
  std::vector<long> primes;
  long level = to_long(order_level(cs.order));
  for (long q = 2; q <= level; ++q)
    if (level % q == 0 && is_prime(q)) primes.push_back(q);
  auto principal = [](const Lattice& l) {
    QuatIdeal j = make_ideal(l);
    return !short_vectors(l.gram(), j.reduced_norm).empty();
  };
  std::vector<std::size_t> reps;
  for (std::size_t j = 0; j < cs.size(); ++j) {
    bool seen = false;
    for (std::size_t i : reps) {
      if (cs.ideals[i].left_order.unit_count != cs.ideals[j].left_order.unit_count) continue;
      Lattice connecting = product(cs.ideals[j].lattice, cs.ideals[i].lattice.conjugate());
      std::vector<Lattice> two_sided;
      for (long q : primes) two_sided.push_back(two_sided_ideal(cs.ideals[i].left_order, q).lattice);
      for (std::size_t mask = 0; mask < (std::size_t{1} << primes.size()) && !seen; ++mask) {
        Lattice l = connecting;
        for (std::size_t b = 0; b < primes.size(); ++b)
          if (mask >> b & 1) l = product(l, two_sided[b]);
        seen = principal(l);
      }
      if (seen) break;
    }
    if (!seen) reps.push_back(j);
  }
  return reps;
}

inline std::size_t type_number(const ClassSet& cs) { return order_types(cs).size(); }

}  // namespace yoshida

#pragma once

#include "yoshida/brandt.hpp"
#include "yoshida/fixture/n17.hpp"
#include "yoshida/lift.hpp"

namespace yoshida::fixture {

/// theta(R1, P1) + theta(I12, P12) straight from the tabulated Gram matrices and polynomials.
inline FourierExpansionSiegel2 lift_golden(const N17& fx, long bound) {
  std::vector<LiftTerm> terms{{fx.r1.gram(), bilinear_poly(fx.p1), 1}, {fx.i12.gram(), bilinear_poly(fx.p12), 1}};
  return assemble_lift(terms, fx.weight, fx.level, bound);
}

struct N17Forms {
  ClassSet cs;
  FormSpace fs1, fs0;
  AutomorphicForm phi1, phi2;
};

/// phi1 (nu = 1) and phi2 (nu = 0) recomputed from the class set, phi2 scaled to the tabulated vector.
inline N17Forms forms(const N17& fx) {
  ClassSet cs = class_set(fx.r1, 2);
  FormSpace fs1(cs, 1), fs0(cs, 0);
  auto pick = [](const FormSpace& fs, const std::vector<EigenBlock>& blocks, long p, const Rational& ev) {
    for (const auto& b : blocks)
      if (b.is_eigenform() && b.eigenvalues.count(p) && b.eigenvalues.at(p) == ev) return fs.unflatten(b.basis[0]);
    throw Error("fixture eigenform not found");
  };
  AutomorphicForm phi2 = pick(fs0, eigenforms(fs0, {2}), 2, -1);
  Rational s = fx.phi2[0] / phi2.values[0][0];
  for (auto& v : phi2.values) v[0] *= s;
  AutomorphicForm phi1 = pick(fs1, eigenforms(fs1, {2}), 2, -3);
  return {cs, fs1, fs0, phi1, phi2};
}

}  // namespace yoshida::fixture

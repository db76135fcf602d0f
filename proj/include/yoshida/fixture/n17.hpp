#pragma once

// Requires the generated header from the yoshida_fixture CMake target.
#include <yoshida/embedded_fixture.hpp>

#include <map>
#include <string>
#include <vector>

#include "yoshida/io/json.hpp"
#include "yoshida/quatcore.hpp"

namespace yoshida::fixture {

struct GoldenCoefficient {
  long a, b, c;
  Rational value;
};

/// The level-17 worked example: algebra, orders, ideal, forms, polynomials and golden values.
struct N17 {
  AlgebraPtr algebra;
  LatticeOrder r1;
  LatticeOrder r2;
  QuatIdeal i12;
  io::Json golden;

  long level = 0;
  long weight = 0;
  long class_number = 0;
  long type_number = 0;
  std::vector<long> unit_counts;
  std::map<std::string, Matrix> published_gram;
  std::map<std::string, Matrix> transform;
  Vec phi2;
  Vec phi1_y1_functional;  ///< linear form in R1 coordinates
  Vec phi1_y2_functional;
  Matrix p1;   ///< P1(a, b) = a^t M b in R1 coordinates
  Matrix p12;  ///< P12(a, b) = a^t M b in I12 coordinates
  std::vector<GoldenCoefficient> coefficients;
  long coefficient_a_max = 0;
  long coefficient_c_max = 0;
  std::map<long, Rational> hecke_eigenvalues;
};

inline N17 load_n17() {
  N17 f;
  f.algebra = io::algebra_from(io::parse(std::string(embedded::n17_algebra), "algebra.json"), "algebra.json");
  auto load = [&](std::string_view text, const char* name) {
    auto doc = io::lattice_doc_from(io::parse(std::string(text), name), name);
    return io::lattice_from(doc, f.algebra, name);
  };
  f.r1 = make_order(load(embedded::n17_R1, "R1.json"));
  f.r2 = make_order(load(embedded::n17_R2, "R2.json"));
  f.i12 = make_ideal(load(embedded::n17_I12, "I12.json"));

  const io::Json g = io::parse(std::string(embedded::n17_golden), "golden.json");
  f.golden = g;
  f.level = g.at("level").get<long>();
  f.weight = g.at("weight").get<long>();
  f.class_number = g.at("class_number").get<long>();
  f.type_number = g.at("type_number").get<long>();
  f.unit_counts = g.at("unit_counts").get<std::vector<long>>();
  for (const auto& [k, v] : g.at("gram").items()) f.published_gram[k] = io::matrix_from(v, 4, 4, "golden.gram." + k);
  for (const auto& [k, v] : g.at("transform").items())
    f.transform[k] = io::matrix_from(v, 4, 4, "golden.transform." + k);
  f.phi2 = io::vec_from(g.at("phi2"), 2, "golden.phi2");
  f.phi1_y1_functional = io::vec_from(g.at("phi1").at("y1_functional"), 4, "golden.phi1");
  f.phi1_y2_functional = io::vec_from(g.at("phi1").at("y2_functional"), 4, "golden.phi1");
  f.p1 = io::matrix_from(g.at("P1"), 4, 4, "golden.P1");
  f.p12 = io::matrix_from(g.at("P12"), 4, 4, "golden.P12");
  for (const auto& e : g.at("coefficients"))
    f.coefficients.push_back({e[0].get<long>(), e[1].get<long>(), e[2].get<long>(), io::rational_from(e[3], "golden")});
  f.coefficient_a_max = g.at("coefficient_box").at("a_max").get<long>();
  f.coefficient_c_max = g.at("coefficient_box").at("c_max").get<long>();
  for (const auto& [k, v] : g.at("hecke_eigenvalues").items())
    f.hecke_eigenvalues[std::stol(k)] = io::rational_from(v, "golden.hecke_eigenvalues");
  return f;
}

}  // namespace yoshida::fixture

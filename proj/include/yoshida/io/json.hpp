#pragma once

#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "yoshida/core/error.hpp"
#include "yoshida/core/matrix.hpp"
#include "yoshida/core/rational.hpp"
#include "yoshida/quatcore.hpp"

namespace yoshida::io {

using Json = nlohmann::json;

/// Canonical document text: two-space indentation, sorted keys, trailing newline.
inline std::string dump(const Json& j) { return j.dump(2) + "\n"; }

inline Json parse(const std::string& text, const std::string& source = "<input>") {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw FormatError(source + ": " + e.what());
  }
}

inline Json rational_json(const Rational& r) { return to_string(r); }

/// Rationals are strings "num/den"; plain JSON integers are accepted on input.
inline Rational rational_from(const Json& j, const std::string& where) {
  if (j.is_string()) {
    try {
      return parse_rational(j.get<std::string>());
    } catch (const FormatError& e) {
      throw FormatError(where + ": " + e.what());
    }
  }
  if (j.is_number_integer()) return Rational(j.get<long>());
  throw FormatError(where + ": expected a rational string");
}

inline Vec vec_from(const Json& j, std::size_t n, const std::string& where) {
  if (!j.is_array() || j.size() != n) throw FormatError(where + ": expected an array of " + std::to_string(n));
  Vec v;
  for (std::size_t i = 0; i < n; ++i) v.push_back(rational_from(j[i], where + "[" + std::to_string(i) + "]"));
  return v;
}

inline Json vec_json(const Vec& v) {
  Json a = Json::array();
  for (const auto& x : v) a.push_back(rational_json(x));
  return a;
}

inline Json matrix_json(const Matrix& m) {
  Json a = Json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) a.push_back(vec_json(m.row(i)));
  return a;
}

inline Matrix matrix_from(const Json& j, std::size_t rows, std::size_t cols, const std::string& where) {
  if (!j.is_array() || j.size() != rows) throw FormatError(where + ": expected " + std::to_string(rows) + " rows");
  std::vector<Vec> r;
  for (std::size_t i = 0; i < rows; ++i) r.push_back(vec_from(j[i], cols, where + "[" + std::to_string(i) + "]"));
  return Matrix::from_rows(r);
}

inline const Json& field(const Json& j, const std::string& key, const std::string& where) {
  if (!j.is_object() || !j.contains(key)) throw FormatError(where + ": missing field \"" + key + "\"");
  return j.at(key);
}

inline AlgebraPtr algebra_from(const Json& j, const std::string& where = "algebra") {
  const Json& sc = field(j, "structure_constants", where);
  if (!sc.is_array() || sc.size() != 4) throw FormatError(where + ": structure_constants must be 4x4x4");
  QuaternionAlgebra::Table t;
  for (std::size_t i = 0; i < 4; ++i) {
    if (!sc[i].is_array() || sc[i].size() != 4) throw FormatError(where + ": structure_constants must be 4x4x4");
    for (std::size_t k = 0; k < 4; ++k)
      t[i][k] = vec_from(sc[i][k], 4,
                         where + ".structure_constants[" + std::to_string(i) + "][" + std::to_string(k) + "]");
  }
  Vec unit = vec_from(field(j, "unit", where), 4, where + ".unit");
  std::vector<std::string> names;
  if (j.contains("basis_names")) names = j.at("basis_names").get<std::vector<std::string>>();
  std::string name = j.contains("name") ? j.at("name").get<std::string>() : std::string();
  try {
    return QuaternionAlgebra::make(std::move(t), std::move(unit), std::move(names), std::move(name));
  } catch (const FormatError&) {
    throw;
  } catch (const Error& e) {
    throw FormatError(where + ": " + e.what());
  }
}

inline Json algebra_json(const QuaternionAlgebra& a) {
  Json j;
  if (!a.name().empty()) j["name"] = a.name();
  j["basis_names"] = a.basis_names();
  Json sc = Json::array();
  for (std::size_t i = 0; i < 4; ++i) {
    Json row = Json::array();
    for (std::size_t k = 0; k < 4; ++k) row.push_back(vec_json(a.structure_constants()[i][k]));
    sc.push_back(row);
  }
  j["structure_constants"] = sc;
  j["unit"] = vec_json(a.unit());
  return j;
}

/// A lattice document: {algebra_ref, basis[4][4], kind, left_order?, right_order?}.
struct LatticeDoc {
  std::string algebra_ref;
  std::string kind;
  std::vector<Vec> basis;
  std::string left_order;
  std::string right_order;
};

inline LatticeDoc lattice_doc_from(const Json& j, const std::string& where = "lattice") {
  LatticeDoc d;
  d.algebra_ref = field(j, "algebra_ref", where).get<std::string>();
  d.kind = field(j, "kind", where).get<std::string>();
  if (d.kind != "order" && d.kind != "ideal") throw FormatError(where + ": kind must be \"order\" or \"ideal\"");
  const Json& b = field(j, "basis", where);
  if (!b.is_array() || b.size() != 4) throw FormatError(where + ": basis must have 4 vectors");
  for (std::size_t i = 0; i < 4; ++i) d.basis.push_back(vec_from(b[i], 4, where + ".basis[" + std::to_string(i) + "]"));
  if (j.contains("left_order")) d.left_order = j.at("left_order").get<std::string>();
  if (j.contains("right_order")) d.right_order = j.at("right_order").get<std::string>();
  return d;
}

inline Json lattice_json(const LatticeDoc& d) {
  Json j;
  j["algebra_ref"] = d.algebra_ref;
  j["kind"] = d.kind;
  Json b = Json::array();
  for (const auto& v : d.basis) b.push_back(vec_json(v));
  j["basis"] = b;
  if (!d.left_order.empty()) j["left_order"] = d.left_order;
  if (!d.right_order.empty()) j["right_order"] = d.right_order;
  return j;
}

/// Builds the lattice of a document; orders are checked against the order axioms.
inline Lattice lattice_from(const LatticeDoc& d, const AlgebraPtr& a, const std::string& where = "lattice") {
  try {
    Lattice l(a, d.basis);
    if (d.kind == "order") make_order(l);
    return l;
  } catch (const FormatError&) {
    throw;
  } catch (const Error& e) {
    throw FormatError(where + ": " + e.what());
  }
}

}  // namespace yoshida::io

#pragma once

#include <string>

#include "yoshida/io/json.hpp"
#include "yoshida/lift.hpp"

namespace yoshida::io {

/// {bound, entries: [[a, b, c, "num/den"], ...] in (disc, a, b) order, level, weight}.
inline Json expansion_json(const FourierExpansionSiegel2& f) {
  Json j;
  j["weight"] = f.weight;
  j["level"] = f.level;
  j["bound"] = f.bound;
  Json e = Json::array();
  for (const auto& [t, v] : f.entries) e.push_back(Json::array({t.a, t.b, t.c, to_string(v)}));
  j["entries"] = e;
  return j;
}

inline FourierExpansionSiegel2 expansion_from(const Json& j, const std::string& where = "expansion") {
  FourierExpansionSiegel2 f;
  auto integer = [&](const Json& v, const std::string& name) {
    if (!v.is_number_integer()) throw FormatError(where + ": " + name + " must be an integer");
    return v.get<long>();
  };
  f.weight = integer(field(j, "weight", where), "weight");
  f.level = integer(field(j, "level", where), "level");
  f.bound = integer(field(j, "bound", where), "bound");
  if (f.weight < 1 || f.level < 1 || f.bound < 0) throw FormatError(where + ": weight, level and bound out of range");
  const Json& e = field(j, "entries", where);
  if (!e.is_array()) throw FormatError(where + ": entries must be an array");
  for (std::size_t i = 0; i < e.size(); ++i) {
    const std::string at = where + ".entries[" + std::to_string(i) + "]";
    const Json& row = e[i];
    if (!row.is_array() || row.size() != 4) throw FormatError(at + ": expected [a, b, c, \"value\"]");
    BinaryForm t{integer(row[0], "a"), integer(row[1], "b"), integer(row[2], "c")};
    if (!is_reduced(t)) throw FormatError(at + ": form " + t.to_string() + " is not reduced");
    if (!in_coverage(t, f.bound)) throw FormatError(at + ": form " + t.to_string() + " is outside the bound");
    if (f.entries.count(t)) throw FormatError(at + ": duplicate form " + t.to_string());
    Rational v = rational_from(row[3], at);
    if (v != 0) f.entries.emplace(t, v);
  }
  return f;
}

inline Json qexpansion_json(const QExpansion& q) {
  Json j;
  j["weight"] = q.weight;
  j["level"] = q.level;
  j["bound"] = q.bound;
  Json c = Json::array();
  for (const auto& v : q.coefficients) c.push_back(to_string(v));
  j["coefficients"] = c;
  return j;
}

}  // namespace yoshida::io

#pragma once

#include <cstddef>
#include <vector>

#include "yoshida/core/rational.hpp"

namespace yoshida::modp {

using Row = std::vector<long>;

inline long inv(long a, long p) {
  long t = 0, nt = 1, r = p, nr = mod_floor(a, p);
  while (nr) {
    long q = r / nr;
    long tmp = t - q * nt;
    t = nt;
    nt = tmp;
    tmp = r - q * nr;
    r = nr;
    nr = tmp;
  }
  if (r != 1) throw UsageError("not invertible modulo p");
  return mod_floor(t, p);
}

/// Row-reduces in place over F_p; returns pivot columns. Rows end in reduced echelon form.
inline std::vector<std::size_t> rref(std::vector<Row>& m, long p) {
  std::vector<std::size_t> pivots;
  if (m.empty()) return pivots;
  const std::size_t cols = m.front().size();
  std::size_t r = 0;
  for (auto& row : m)
    for (auto& v : row) v = mod_floor(v, p);
  for (std::size_t c = 0; c < cols && r < m.size(); ++c) {
    std::size_t piv = r;
    while (piv < m.size() && m[piv][c] == 0) ++piv;
    if (piv == m.size()) continue;
    std::swap(m[piv], m[r]);
    long iv = inv(m[r][c], p);
    for (auto& v : m[r]) v = v * iv % p;
    for (std::size_t i = 0; i < m.size(); ++i) {
      if (i == r || m[i][c] == 0) continue;
      long f = m[i][c];
      for (std::size_t j = 0; j < cols; ++j) m[i][j] = mod_floor(m[i][j] - f * m[r][j], p);
    }
    pivots.push_back(c);
    ++r;
  }
  m.resize(r);
  return pivots;
}

/// Whether v lies in the row space of an rref basis with the given pivots.
inline bool in_span(const std::vector<Row>& basis, const std::vector<std::size_t>& pivots, Row v, long p) {
  for (auto& x : v) x = mod_floor(x, p);
  for (std::size_t k = 0; k < basis.size(); ++k) {
    long f = v[pivots[k]];
    if (!f) continue;
    for (std::size_t j = 0; j < v.size(); ++j) v[j] = mod_floor(v[j] - f * basis[k][j], p);
  }
  for (long x : v)
    if (x) return false;
  return true;
}

/// All k-dimensional subspaces of F_p^n, each given by its reduced echelon basis.
inline std::vector<std::vector<Row>> subspaces(std::size_t n, std::size_t k, long p) {
  std::vector<std::vector<Row>> out;
  std::vector<std::size_t> piv(k);
  auto choose = [&](auto&& self, std::size_t idx, std::size_t start) -> void {
    if (idx == k) {
      // Free positions: columns after each pivot that are not pivots themselves.
      std::vector<std::pair<std::size_t, std::size_t>> free;
      for (std::size_t r = 0; r < k; ++r)
        for (std::size_t c = piv[r] + 1; c < n; ++c) {
          bool is_piv = false;
          for (auto q : piv) is_piv |= (q == c);
          if (!is_piv) free.emplace_back(r, c);
        }
      std::vector<long> vals(free.size(), 0);
      while (true) {
        std::vector<Row> b(k, Row(n, 0));
        for (std::size_t r = 0; r < k; ++r) b[r][piv[r]] = 1;
        for (std::size_t f = 0; f < free.size(); ++f) b[free[f].first][free[f].second] = vals[f];
        out.push_back(std::move(b));
        std::size_t f = 0;
        while (f < vals.size() && ++vals[f] == p) vals[f++] = 0;
        if (f == vals.size()) break;
      }
      return;
    }
    for (std::size_t c = start; c < n; ++c) {
      piv[idx] = c;
      self(self, idx + 1, c + 1);
    }
  };
  choose(choose, 0, 0);
  return out;
}

}  // namespace yoshida::modp

#pragma once

#include <cstddef>
#include <map>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "yoshida/core/error.hpp"
#include "yoshida/core/matrix.hpp"
#include "yoshida/core/rational.hpp"

namespace yoshida {

using Exponent = std::vector<int>;

/// Sparse multivariate polynomial over Q in a fixed number of variables.
/// Zero coefficients are never stored, so structural equality is polynomial equality.
class Poly {
 public:
  Poly() = default;
  explicit Poly(std::size_t nvars) : nvars_(nvars) {}

  static Poly constant(std::size_t nvars, const Rational& c) {
    Poly p(nvars);
    p.add_term(Exponent(nvars, 0), c);
    return p;
  }
  static Poly variable(std::size_t nvars, std::size_t i) {
    if (i >= nvars) throw UsageError("variable index out of range");
    Exponent e(nvars, 0);
    e[i] = 1;
    Poly p(nvars);
    p.add_term(e, 1);
    return p;
  }
  /// The linear form sum_i c[i] x_i.
  static Poly linear(const Vec& c) {
    Poly p(c.size());
    for (std::size_t i = 0; i < c.size(); ++i)
      if (c[i] != 0) p += c[i] * variable(c.size(), i);
    return p;
  }

  std::size_t nvars() const { return nvars_; }
  const std::map<Exponent, Rational>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  Rational coeff(const Exponent& e) const {
    auto it = terms_.find(e);
    return it == terms_.end() ? Rational(0) : it->second;
  }

  void add_term(const Exponent& e, const Rational& c) {
    if (e.size() != nvars_) throw UsageError("exponent length does not match variable count");
    if (c == 0) return;
    auto [it, inserted] = terms_.try_emplace(e, c);
    if (!inserted) {
      it->second += c;
      if (it->second == 0) terms_.erase(it);
    }
  }

  /// Total degree; -1 for the zero polynomial.
  int degree() const {
    int d = -1;
    for (const auto& [e, c] : terms_) {
      int s = 0;
      for (int v : e) s += v;
      d = std::max(d, s);
    }
    return d;
  }

  bool is_homogeneous(int deg) const {
    for (const auto& [e, c] : terms_) {
      int s = 0;
      for (int v : e) s += v;
      if (s != deg) return false;
    }
    return true;
  }

  Poly& operator+=(const Poly& o) {
    check(o);
    for (const auto& [e, c] : o.terms_) add_term(e, c);
    return *this;
  }
  Poly& operator-=(const Poly& o) {
    check(o);
    for (const auto& [e, c] : o.terms_) add_term(e, -c);
    return *this;
  }
  friend Poly operator+(Poly a, const Poly& b) { return a += b; }
  friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
  friend Poly operator-(Poly a) {
    for (auto& [e, c] : a.terms_) c = -c;
    return a;
  }
  friend Poly operator*(const Rational& s, Poly a) {
    if (s == 0) return Poly(a.nvars_);
    for (auto& [e, c] : a.terms_) c *= s;
    return a;
  }
  friend Poly operator*(const Poly& a, const Poly& b) {
    a.check(b);
    Poly out(a.nvars_);
    Exponent e(a.nvars_);
    for (const auto& [ea, ca] : a.terms_)
      for (const auto& [eb, cb] : b.terms_) {
        for (std::size_t i = 0; i < e.size(); ++i) e[i] = ea[i] + eb[i];
        out.add_term(e, ca * cb);
      }
    return out;
  }
  friend bool operator==(const Poly& a, const Poly& b) {
    return a.nvars_ == b.nvars_ && a.terms_ == b.terms_;
  }

  Poly pow(unsigned k) const {
    Poly r = constant(nvars_, 1);
    for (unsigned i = 0; i < k; ++i) r = r * *this;
    return r;
  }

  Rational evaluate(const Vec& x) const {
    if (x.size() != nvars_) throw UsageError("evaluation point has wrong dimension");
    Rational s = 0;
    for (const auto& [e, c] : terms_) {
      Rational t = c;
      for (std::size_t i = 0; i < nvars_; ++i)
        if (e[i]) t *= pow_int(x[i], e[i]);
      s += t;
    }
    return s;
  }

  /// Substitutes x_i -> images[i]; all images share one variable count.
  Poly compose(const std::vector<Poly>& images) const {
    if (images.size() != nvars_) throw UsageError("compose: wrong number of images");
    std::size_t m = images.empty() ? 0 : images.front().nvars_;
    // Powers are cached per variable since the same factors recur.
    std::vector<std::vector<Poly>> powers(nvars_);
    Poly out(m);
    for (const auto& [e, c] : terms_) {
      Poly t = constant(m, c);
      for (std::size_t i = 0; i < nvars_; ++i) {
        if (!e[i]) continue;
        auto& cache = powers[i];
        if (cache.empty()) cache.push_back(constant(m, 1));
        while (static_cast<int>(cache.size()) <= e[i]) cache.push_back(cache.back() * images[i]);
        t = t * cache[e[i]];
      }
      out += t;
    }
    return out;
  }

  Poly derivative(std::size_t i) const {
    Poly out(nvars_);
    for (const auto& [e, c] : terms_) {
      if (!e[i]) continue;
      Exponent f = e;
      f[i] -= 1;
      out.add_term(f, c * e[i]);
    }
    return out;
  }

  /// sum_ij m(i,j) d_i d_j of this polynomial.
  Poly laplacian(const Matrix& m) const {
    if (m.rows() != nvars_ || m.cols() != nvars_) throw UsageError("laplacian: matrix shape mismatch");
    Poly out(nvars_);
    for (std::size_t i = 0; i < nvars_; ++i) {
      Poly di = derivative(i);
      for (std::size_t j = 0; j < nvars_; ++j)
        if (m(i, j) != 0) out += m(i, j) * di.derivative(j);
    }
    return out;
  }

  std::string to_string(const std::vector<std::string>& names = {}) const {
    if (terms_.empty()) return "0";
    std::string s;
    bool first = true;
    for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
      const auto& [e, c] = *it;
      Rational a = c;
      if (!first) s += sgn(a) < 0 ? " - " : " + ";
      else if (sgn(a) < 0) s += "-";
      if (!first || sgn(a) < 0) a = abs(a);
      first = false;
      std::string mono;
      for (std::size_t i = 0; i < nvars_; ++i) {
        if (!e[i]) continue;
        if (!mono.empty()) mono += "*";
        mono += i < names.size() ? names[i] : "x" + std::to_string(i);
        if (e[i] > 1) mono += "^" + std::to_string(e[i]);
      }
      if (mono.empty()) s += yoshida::to_string(a);
      else if (a == 1) s += mono;
      else s += yoshida::to_string(a) + "*" + mono;
    }
    return s;
  }

 private:
  void check(const Poly& o) const {
    if (o.nvars_ != nvars_) throw UsageError("polynomials over different variable sets");
  }

  std::size_t nvars_ = 0;
  std::map<Exponent, Rational> terms_;
};

/// All exponent vectors of total degree d in n variables, in lexicographically decreasing order.
inline std::vector<Exponent> monomials(std::size_t n, int d) {
  std::vector<Exponent> out;
  Exponent e(n, 0);
  auto rec = [&](auto&& self, std::size_t i, int left) -> void {
    if (i + 1 == n) {
      e[i] = left;
      out.push_back(e);
      return;
    }
    for (int k = left; k >= 0; --k) {
      e[i] = k;
      self(self, i + 1, left - k);
    }
  };
  if (n == 0) {
    if (d == 0) out.push_back({});
    return out;
  }
  rec(rec, 0, d);
  return out;
}

}  // namespace yoshida

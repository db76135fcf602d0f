#pragma once

#include <algorithm>
#include <cstddef>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "yoshida/core/error.hpp"
#include "yoshida/core/matrix.hpp"
#include "yoshida/core/modp.hpp"
#include "yoshida/core/rational.hpp"

namespace yoshida {

/// Dense univariate polynomial over Q; coefficient i belongs to X^i. Never has a zero leading term.
class UPoly {
 public:
  UPoly() = default;
  explicit UPoly(Vec coeffs) : c_(std::move(coeffs)) { trim(); }
  static UPoly constant(const Rational& c) { return UPoly(Vec{c}); }
  static UPoly x() { return UPoly(Vec{0, 1}); }

  int degree() const { return static_cast<int>(c_.size()) - 1; }
  bool is_zero() const { return c_.empty(); }
  const Vec& coeffs() const { return c_; }
  Rational coeff(std::size_t i) const { return i < c_.size() ? c_[i] : Rational(0); }
  Rational lead() const { return c_.empty() ? Rational(0) : c_.back(); }

  friend UPoly operator+(const UPoly& a, const UPoly& b) {
    Vec r(std::max(a.c_.size(), b.c_.size()));
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = a.coeff(i) + b.coeff(i);
    return UPoly(r);
  }
  friend UPoly operator-(const UPoly& a, const UPoly& b) {
    Vec r(std::max(a.c_.size(), b.c_.size()));
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = a.coeff(i) - b.coeff(i);
    return UPoly(r);
  }
  friend UPoly operator*(const UPoly& a, const UPoly& b) {
    if (a.is_zero() || b.is_zero()) return {};
    Vec r(a.c_.size() + b.c_.size() - 1);
    for (std::size_t i = 0; i < a.c_.size(); ++i)
      for (std::size_t j = 0; j < b.c_.size(); ++j) r[i + j] += a.c_[i] * b.c_[j];
    return UPoly(r);
  }
  friend UPoly operator*(const Rational& s, const UPoly& a) {
    Vec r = a.c_;
    for (auto& v : r) v *= s;
    return UPoly(r);
  }
  friend bool operator==(const UPoly& a, const UPoly& b) { return a.c_ == b.c_; }
  friend bool operator<(const UPoly& a, const UPoly& b) {
    if (a.degree() != b.degree()) return a.degree() < b.degree();
    for (std::size_t i = a.c_.size(); i-- > 0;)
      if (a.c_[i] != b.c_[i]) return a.c_[i] < b.c_[i];
    return false;
  }

  /// Quotient and remainder.
  friend std::pair<UPoly, UPoly> divmod(const UPoly& a, const UPoly& b) {
    if (b.is_zero()) throw UsageError("polynomial division by zero");
    Vec r = a.c_;
    if (a.degree() < b.degree()) return {UPoly(), a};
    Vec q(a.c_.size() - b.c_.size() + 1);
    for (std::size_t i = q.size(); i-- > 0;) {
      Rational f = r[i + b.c_.size() - 1] / b.lead();
      q[i] = f;
      if (f != 0)
        for (std::size_t j = 0; j < b.c_.size(); ++j) r[i + j] -= f * b.c_[j];
    }
    return {UPoly(q), UPoly(r)};
  }

  UPoly monic() const {
    if (is_zero()) return *this;
    return (1 / lead()) * *this;
  }

  UPoly derivative() const {
    if (c_.size() <= 1) return {};
    Vec r(c_.size() - 1);
    for (std::size_t i = 1; i < c_.size(); ++i) r[i - 1] = c_[i] * static_cast<long>(i);
    return UPoly(r);
  }

  Rational evaluate(const Rational& x) const {
    Rational s = 0;
    for (std::size_t i = c_.size(); i-- > 0;) s = s * x + c_[i];
    return s;
  }

  double evaluate(double x) const {
    double s = 0;
    for (std::size_t i = c_.size(); i-- > 0;) s = s * x + c_[i].get_d();
    return s;
  }

  Matrix evaluate(const Matrix& m) const {
    Matrix s(m.rows(), m.cols());
    for (std::size_t i = c_.size(); i-- > 0;) {
      s = s * m;
      for (std::size_t k = 0; k < m.rows(); ++k) s(k, k) += c_[i];
    }
    return s;
  }

  /// P(s * X).
  UPoly scale_variable(const Rational& s) const {
    Vec r = c_;
    Rational f = 1;
    for (auto& v : r) {
      v *= f;
      f *= s;
    }
    return UPoly(r);
  }

  /// Text such as "1 - 5*X + 3*X^2".
  std::string to_string(const std::string& var = "X") const {
    if (c_.empty()) return "0";
    std::string s;
    bool first = true;
    for (std::size_t i = 0; i < c_.size(); ++i) {
      if (c_[i] == 0) continue;
      Rational a = c_[i];
      if (first) {
        if (sgn(a) < 0) s += "-";
      } else {
        s += sgn(a) < 0 ? " - " : " + ";
      }
      a = abs(a);
      first = false;
      if (i == 0) {
        s += yoshida::to_string(a);
        continue;
      }
      if (a != 1) s += yoshida::to_string(a) + "*";
      s += var;
      if (i > 1) s += "^" + std::to_string(i);
    }
    return s;
  }

 private:
  void trim() {
    while (!c_.empty() && c_.back() == 0) c_.pop_back();
  }
  Vec c_;
};

inline UPoly gcd(UPoly a, UPoly b) {
  while (!b.is_zero()) {
    auto r = divmod(a, b).second;
    a = std::move(b);
    b = std::move(r);
  }
  return a.monic();
}

namespace detail::fp {

// Polynomials over F_p as coefficient vectors (low to high), trimmed.
using P = std::vector<long>;

inline void trim(P& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}
inline P norm(P a, long p) {
  for (auto& v : a) v = mod_floor(v, p);
  trim(a);
  return a;
}
inline P sub(const P& a, const P& b, long p) {
  P r(std::max(a.size(), b.size()), 0);
  for (std::size_t i = 0; i < r.size(); ++i)
    r[i] = mod_floor((i < a.size() ? a[i] : 0) - (i < b.size() ? b[i] : 0), p);
  trim(r);
  return r;
}
inline P mul(const P& a, const P& b, long p) {
  if (a.empty() || b.empty()) return {};
  P r(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) r[i + j] = (r[i + j] + a[i] * b[j]) % p;
  trim(r);
  return r;
}
inline std::pair<P, P> divmod(P a, const P& b, long p) {
  if (b.empty()) throw UsageError("division by zero in F_p[x]");
  long inv_lead = modp::inv(b.back(), p);
  if (a.size() < b.size()) return {{}, a};
  P q(a.size() - b.size() + 1, 0);
  for (std::size_t i = q.size(); i-- > 0;) {
    long f = a[i + b.size() - 1] * inv_lead % p;
    q[i] = f;
    if (f)
      for (std::size_t j = 0; j < b.size(); ++j) a[i + j] = mod_floor(a[i + j] - f * b[j], p);
  }
  trim(a);
  trim(q);
  return {q, a};
}
inline P monic(const P& a, long p) {
  if (a.empty()) return a;
  long iv = modp::inv(a.back(), p);
  P r = a;
  for (auto& v : r) v = v * iv % p;
  return r;
}
inline P gcd(P a, P b, long p) {
  while (!b.empty()) {
    P r = divmod(a, b, p).second;
    a = std::move(b);
    b = std::move(r);
  }
  return monic(a, p);
}
/// s, t with s a + t b = gcd(a, b) (monic).
inline void xgcd(const P& a, const P& b, long p, P& s, P& t) {
  P r0 = a, r1 = b, s0{1}, s1{}, t0{}, t1{1};
  while (!r1.empty()) {
    auto [q, r] = divmod(r0, r1, p);
    P s2 = sub(s0, mul(q, s1, p), p);
    P t2 = sub(t0, mul(q, t1, p), p);
    r0 = std::move(r1);
    r1 = std::move(r);
    s0 = std::move(s1);
    s1 = std::move(s2);
    t0 = std::move(t1);
    t1 = std::move(t2);
  }
  long iv = modp::inv(r0.back(), p);
  for (auto& v : s0) v = v * iv % p;
  for (auto& v : t0) v = v * iv % p;
  s = s0;
  t = t0;
}
inline P powmod(P base, Integer e, const P& m, long p) {
  P r{1};
  base = divmod(base, m, p).second;
  while (e > 0) {
    if (mpz_odd_p(e.get_mpz_t())) r = divmod(mul(r, base, p), m, p).second;
    base = divmod(mul(base, base, p), m, p).second;
    e >>= 1;
  }
  return r;
}
inline P derivative(const P& a, long p) {
  P r;
  for (std::size_t i = 1; i < a.size(); ++i) r.push_back(a[i] * static_cast<long>(i) % p);
  trim(r);
  return r;
}

/// Monic irreducible factors of a squarefree monic f over F_p, p odd.
inline std::vector<P> factor_squarefree(const P& f, long p, std::mt19937_64& rng) {
  std::vector<P> out;
  // Distinct-degree split.
  std::vector<std::pair<P, int>> dd;
  P rest = f, h{0, 1};
  for (int d = 1; 2 * d <= static_cast<int>(rest.size()) - 1; ++d) {
    h = powmod(h, Integer(p), rest, p);
    P g = gcd(sub(h, P{0, 1}, p), rest, p);
    if (g.size() > 1) {
      dd.emplace_back(g, d);
      rest = divmod(rest, g, p).first;
      h = divmod(h, rest, p).second;
    }
  }
  if (rest.size() > 1) dd.emplace_back(monic(rest, p), static_cast<int>(rest.size()) - 1);
  // Equal-degree split (Cantor-Zassenhaus).
  for (auto& [g, d] : dd) {
    std::vector<P> todo{g};
    while (!todo.empty()) {
      P cur = todo.back();
      todo.pop_back();
      if (static_cast<int>(cur.size()) - 1 == d) {
        out.push_back(cur);
        continue;
      }
      Integer e;
      mpz_ui_pow_ui(e.get_mpz_t(), static_cast<unsigned long>(p), static_cast<unsigned long>(d));
      e = (e - 1) / 2;
      while (true) {
        P a(cur.size() - 1);
        for (auto& v : a) v = static_cast<long>(rng() % static_cast<unsigned long>(p));
        trim(a);
        if (a.size() < 2) continue;
        P b = sub(powmod(a, e, cur, p), P{1}, p);
        P g2 = gcd(b, cur, p);
        if (g2.size() > 1 && g2.size() < cur.size()) {
          todo.push_back(g2);
          todo.push_back(monic(divmod(cur, g2, p).first, p));
          break;
        }
      }
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace detail::fp

namespace detail::zx {

using Z = std::vector<Integer>;

inline void trim(Z& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}
inline Z mul(const Z& a, const Z& b) {
  if (a.empty() || b.empty()) return {};
  Z r(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
  trim(r);
  return r;
}
inline Z mod(Z a, const Integer& m) {
  for (auto& v : a) mpz_fdiv_r(v.get_mpz_t(), v.get_mpz_t(), m.get_mpz_t());
  trim(a);
  return a;
}
inline Z symmetric(Z a, const Integer& m) {
  Integer half = m / 2;
  for (auto& v : a) {
    mpz_fdiv_r(v.get_mpz_t(), v.get_mpz_t(), m.get_mpz_t());
    if (v > half) v -= m;
  }
  trim(a);
  return a;
}
inline fp::P to_fp(const Z& a, long p) {
  fp::P r;
  for (const auto& v : a) {
    Integer t;
    mpz_fdiv_r_ui(t.get_mpz_t(), v.get_mpz_t(), static_cast<unsigned long>(p));
    r.push_back(t.get_si());
  }
  fp::trim(r);
  return r;
}
inline Z from_fp(const fp::P& a) {
  Z r;
  for (long v : a) r.push_back(Integer(v));
  return r;
}
inline Integer content(const Z& a) {
  Integer g = 0;
  for (const auto& v : a) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), v.get_mpz_t());
  return g;
}
inline Z primitive(Z a) {
  Integer g = content(a);
  if (g == 0) return a;
  if (a.back() < 0) g = -g;
  for (auto& v : a) v /= g;
  return a;
}
/// Exact quotient a / b over Z, or false when b does not divide a.
inline bool divides(const Z& a, const Z& b, Z& q) {
  Z r = a;
  if (r.size() < b.size()) return false;
  q.assign(r.size() - b.size() + 1, 0);
  for (std::size_t i = q.size(); i-- > 0;) {
    Integer num = r[i + b.size() - 1];
    if (!mpz_divisible_p(num.get_mpz_t(), b.back().get_mpz_t())) return false;
    Integer f = num / b.back();
    q[i] = f;
    if (f != 0)
      for (std::size_t j = 0; j < b.size(); ++j) r[i + j] -= f * b[j];
  }
  for (const auto& v : r)
    if (v != 0) return false;
  trim(q);
  return true;
}

/// Lifts g = a * b (mod p), a monic and coprime to b mod p, to a factorisation mod p^k.
inline void hensel2(const Z& g, Z& a, Z& b, long p, int k) {
  fp::P s, t;
  fp::xgcd(to_fp(a, p), to_fp(b, p), p, s, t);
  Integer m = p;
  for (int step = 1; step < k; ++step) {
    Z err = mul(a, b);
    Z e(std::max(g.size(), err.size()), 0);
    for (std::size_t i = 0; i < e.size(); ++i) e[i] = (i < g.size() ? g[i] : 0) - (i < err.size() ? err[i] : 0);
    for (auto& v : e) {
      if (!mpz_divisible_p(v.get_mpz_t(), m.get_mpz_t())) throw Error("Hensel lifting invariant violated");
      v /= m;
    }
    trim(e);
    fp::P ep = to_fp(e, p);
    fp::P tau = fp::divmod(fp::mul(ep, t, p), to_fp(a, p), p).second;
    fp::P rest = fp::sub(ep, fp::mul(tau, to_fp(b, p), p), p);
    auto [sigma, rem] = fp::divmod(rest, to_fp(a, p), p);
    if (!rem.empty()) throw Error("Hensel lifting: inexact division");
    Z tz = from_fp(tau), sz = from_fp(sigma);
    for (auto& v : tz) v *= m;
    for (auto& v : sz) v *= m;
    auto add = [](Z x, const Z& y) {
      if (x.size() < y.size()) x.resize(y.size(), 0);
      for (std::size_t i = 0; i < y.size(); ++i) x[i] += y[i];
      trim(x);
      return x;
    };
    a = add(a, tz);
    b = add(b, sz);
    m *= p;
  }
}

/// Lifts monic factors f_i with g = lc(g) * prod f_i (mod p) to mod p^k; returned factors are monic.
inline std::vector<Z> hensel(const Z& g, const std::vector<fp::P>& factors, long p, int k) {
  Integer pk;
  mpz_ui_pow_ui(pk.get_mpz_t(), static_cast<unsigned long>(p), static_cast<unsigned long>(k));
  if (factors.size() == 1) {
    // g / lc(g) mod p^k.
    Integer inv;
    Integer lc = g.back();
    mpz_invert(inv.get_mpz_t(), lc.get_mpz_t(), pk.get_mpz_t());
    Z r = g;
    for (auto& v : r) v *= inv;
    return {mod(r, pk)};
  }
  std::size_t half = factors.size() / 2;
  std::vector<fp::P> fa(factors.begin(), factors.begin() + half), fb(factors.begin() + half, factors.end());
  fp::P ap{1}, bp{to_fp(Z{g.back()}, p)};
  for (const auto& f : fa) ap = fp::mul(ap, f, p);
  for (const auto& f : fb) bp = fp::mul(bp, f, p);
  Z a = from_fp(ap), b = from_fp(bp);
  hensel2(g, a, b, p, k);
  a = mod(a, pk);
  b = mod(b, pk);
  auto ra = hensel(a, fa, p, k);
  auto rb = hensel(b, fb, p, k);
  ra.insert(ra.end(), rb.begin(), rb.end());
  return ra;
}

/// Irreducible factors over Z of a primitive squarefree g with positive leading coefficient.
inline std::vector<Z> factor_squarefree(Z g) {
  if (g.size() <= 2) return {g};
  const std::size_t n = g.size() - 1;
  long p = 3;
  for (;; p += 2) {
    if (!is_prime(p)) continue;
    Integer r;
    mpz_fdiv_r_ui(r.get_mpz_t(), g.back().get_mpz_t(), static_cast<unsigned long>(p));
    if (r == 0) continue;
    fp::P gp = to_fp(g, p);
    if (fp::gcd(gp, fp::derivative(gp, p), p).size() == 1) break;
  }
  std::mt19937_64 rng(0x5eed + static_cast<unsigned long>(p));
  auto modular = fp::factor_squarefree(fp::monic(to_fp(g, p), p), p, rng);
  if (modular.size() == 1) return {g};
  // Factor coefficient bound: 2^n * ||g||_1 * |lc|.
  Integer bound = 0;
  for (const auto& v : g) bound += abs(v);
  bound *= abs(g.back());
  bound <<= static_cast<mp_bitcnt_t>(n + 1);
  int k = 1;
  Integer pk = p;
  while (pk <= bound) {
    pk *= p;
    ++k;
  }
  auto lifted = hensel(g, modular, p, k);
  std::vector<Z> out;
  std::vector<bool> used(lifted.size(), false);
  std::size_t remaining = lifted.size();
  for (std::size_t size = 1; 2 * size <= remaining; ++size) {
    bool restart = true;
    while (restart) {
      restart = false;
      std::vector<std::size_t> idx;
      for (std::size_t i = 0; i < lifted.size(); ++i)
        if (!used[i]) idx.push_back(i);
      if (2 * size > idx.size()) break;
      std::vector<std::size_t> pick(size);
      for (std::size_t i = 0; i < size; ++i) pick[i] = i;
      while (true) {
        Z cand{g.back()};
        for (auto i : pick) cand = mod(mul(cand, lifted[idx[i]]), pk);
        cand = primitive(symmetric(cand, pk));
        Z q;
        if (divides(g, cand, q)) {
          out.push_back(cand);
          g = primitive(q);
          for (auto i : pick) used[idx[i]] = true;
          remaining -= size;
          restart = true;
          break;
        }
        std::size_t t = size;
        while (t > 0 && pick[t - 1] == idx.size() - size + t - 1) --t;
        if (t == 0) break;
        ++pick[t - 1];
        for (std::size_t u = t; u < size; ++u) pick[u] = pick[u - 1] + 1;
      }
    }
  }
  if (g.size() > 1) out.push_back(g);
  return out;
}

}  // namespace detail::zx

/// Monic irreducible factors over Q with multiplicities, sorted by (degree, coefficients).
inline std::vector<std::pair<UPoly, int>> factor(const UPoly& f) {
  if (f.degree() < 1) return {};
  std::vector<std::pair<UPoly, int>> out;
  // Yun's squarefree decomposition.
  UPoly a = f.monic();
  UPoly b = a.derivative();
  UPoly c = gcd(a, b);
  UPoly w = divmod(a, c).first;
  UPoly y = divmod(b, c).first;
  int mult = 1;
  std::vector<std::pair<UPoly, int>> sqfree;
  while (w.degree() > 0) {
    UPoly z = y - w.derivative();
    UPoly g = gcd(w, z);
    if (g.degree() > 0) sqfree.emplace_back(g, mult);
    w = divmod(w, g).first;
    y = divmod(z, g).first;
    ++mult;
  }
  for (const auto& [part, m] : sqfree) {
    Integer den = 1;
    for (const auto& v : part.coeffs()) mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), v.get_den_mpz_t());
    detail::zx::Z z;
    for (const auto& v : part.coeffs()) z.push_back(Rational(v * den).get_num());
    z = detail::zx::primitive(z);
    for (const auto& fz : detail::zx::factor_squarefree(z)) {
      Vec q;
      for (const auto& v : fz) q.push_back(Rational(v));
      out.emplace_back(UPoly(q).monic(), m);
    }
  }
  std::sort(out.begin(), out.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
  return out;
}

inline UPoly charpoly_upoly(const Matrix& m) { return UPoly(charpoly(m)); }

}  // namespace yoshida

#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <string_view>

#include "yoshida/core/error.hpp"

namespace yoshida {

using Integer = mpz_class;
using Rational = mpq_class;

inline Rational make_rational(long num, long den = 1) {
  Rational r(num, den);
  r.canonicalize();
  return r;
}

/// Canonical text form: "num/den", with "/den" omitted when den == 1.
inline std::string to_string(const Rational& r) {
  Rational c = r;
  c.canonicalize();
  if (c.get_den() == 1) return c.get_num().get_str();
  return c.get_num().get_str() + "/" + c.get_den().get_str();
}

inline std::string to_string(const Integer& z) { return z.get_str(); }

/// Parses "num" or "num/den". Accepts a leading U+2212 minus sign as well as '-'.
inline Rational parse_rational(std::string_view text) {
  std::string s(text);
  const std::string unicode_minus = "\xE2\x88\x92";
  if (s.rfind(unicode_minus, 0) == 0) s = "-" + s.substr(unicode_minus.size());
  auto valid_int = [](std::string_view t, bool allow_sign) {
    if (t.empty()) return false;
    std::size_t i = 0;
    if (allow_sign && (t[0] == '-' || t[0] == '+')) i = 1;
    if (i == t.size()) return false;
    for (; i < t.size(); ++i)
      if (t[i] < '0' || t[i] > '9') return false;
    return true;
  };
  auto slash = s.find('/');
  std::string num = s.substr(0, slash);
  std::string den = slash == std::string::npos ? "1" : s.substr(slash + 1);
  if (!num.empty() && num[0] == '+') num = num.substr(1);
  if (!valid_int(num, true) || !valid_int(den, false))
    throw FormatError("malformed rational \"" + std::string(text) + "\"");
  Integer n(num, 10), d(den, 10);
  if (d == 0) throw FormatError("zero denominator in \"" + std::string(text) + "\"");
  Rational r(n, d);
  r.canonicalize();
  return r;
}

inline bool is_integer(const Rational& r) { return r.get_den() == 1; }

inline Integer floor_of(const Rational& r) {
  Integer q;
  mpz_fdiv_q(q.get_mpz_t(), r.get_num_mpz_t(), r.get_den_mpz_t());
  return q;
}

inline Integer ceil_of(const Rational& r) {
  Integer q;
  mpz_cdiv_q(q.get_mpz_t(), r.get_num_mpz_t(), r.get_den_mpz_t());
  return q;
}

/// floor(sqrt(r)) for r >= 0, exact.
inline Integer floor_sqrt(const Rational& r) {
  if (sgn(r) <= 0) return 0;
  Integer prod = r.get_num() * r.get_den();
  Integer s;
  mpz_sqrt(s.get_mpz_t(), prod.get_mpz_t());
  Integer q;
  mpz_fdiv_q(q.get_mpz_t(), s.get_mpz_t(), r.get_den_mpz_t());
  return q;
}

/// Exact k-th root of a nonnegative rational, or throws if it is not a perfect power.
inline Rational exact_root(const Rational& r, unsigned k) {
  if (sgn(r) < 0) throw UsageError("exact_root of a negative rational");
  auto root_int = [k](const Integer& z) {
    Integer out;
    if (mpz_root(out.get_mpz_t(), z.get_mpz_t(), k) == 0)
      throw UsageError("not a perfect power: " + z.get_str());
    return out;
  };
  Rational out(root_int(r.get_num()), root_int(r.get_den()));
  out.canonicalize();
  return out;
}

inline Rational pow_int(const Rational& base, long exponent) {
  Rational result = 1;
  Rational b = base;
  bool invert = exponent < 0;
  unsigned long e = invert ? static_cast<unsigned long>(-exponent) : static_cast<unsigned long>(exponent);
  while (e) {
    if (e & 1UL) result *= b;
    b *= b;
    e >>= 1;
  }
  if (invert) {
    if (result == 0) throw UsageError("division by zero in pow_int");
    result = 1 / result;
  }
  return result;
}

inline long to_long(const Integer& z) {
  if (!z.fits_slong_p()) throw Error("integer does not fit in 64 bits: " + z.get_str());
  return z.get_si();
}

inline long to_long(const Rational& r) {
  if (!is_integer(r)) throw Error("expected an integer, got " + to_string(r));
  return to_long(r.get_num());
}

inline bool is_prime(long n) {
  if (n < 2) return false;
  for (long d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

inline long mod_floor(long a, long m) {
  long r = a % m;
  return r < 0 ? r + m : r;
}

}  // namespace yoshida

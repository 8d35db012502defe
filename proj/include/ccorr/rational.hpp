#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <cstdio>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace ccorr {

/// Exact rational number. Always kept in canonical (reduced, positive
/// denominator) form.
using Rational = mpq_class;
using Integer = mpz_class;

class RationalParseError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

namespace detail {

inline bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s)
    if (c < '0' || c > '9') return false;
  return true;
}

}  // namespace detail

/// Parses "a/b" or "a" (optional leading '-'). Decimal points, exponents
/// and whitespace are rejected.
inline Rational parse_rational(std::string_view text) {
  std::string_view body = text;
  if (!body.empty() && body.front() == '-') body.remove_prefix(1);
  const auto slash = body.find('/');
  const std::string_view num = body.substr(0, slash);
  const std::string_view den =
      slash == std::string_view::npos ? std::string_view{"1"} : body.substr(slash + 1);
  if (!detail::all_digits(num) || !detail::all_digits(den))
    throw RationalParseError("not a rational literal: '" + std::string(text) + "'");
  Integer n(std::string(num), 10);
  Integer d(std::string(den), 10);
  if (d == 0) throw RationalParseError("zero denominator: '" + std::string(text) + "'");
  if (text.front() == '-') n = -n;
  Rational r(n, d);
  r.canonicalize();
  return r;
}

/// Comma separated list of rationals, e.g. "1/3,1/2,2/3".
inline std::vector<Rational> parse_rational_list(std::string_view text) {
  std::vector<Rational> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto comma = text.find(',', start);
    const auto piece = text.substr(start, comma == std::string_view::npos ? text.npos : comma - start);
    out.push_back(parse_rational(piece));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

inline std::string to_string(const Rational& r) { return r.get_str(); }

/// 12 significant digits; display only, the exact string is authoritative.
inline std::string to_decimal(const Rational& r) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", r.get_d());
  return buf;
}

inline Rational pow(const Rational& base, unsigned long exponent) {
  Integer num, den;
  mpz_pow_ui(num.get_mpz_t(), base.get_num_mpz_t(), exponent);
  mpz_pow_ui(den.get_mpz_t(), base.get_den_mpz_t(), exponent);
  Rational r(num, den);
  r.canonicalize();
  return r;
}

inline Integer pow(const Integer& base, unsigned long exponent) {
  Integer out;
  mpz_pow_ui(out.get_mpz_t(), base.get_mpz_t(), exponent);
  return out;
}

inline Rational make_rational(long num, long den = 1) {
  Rational r(num, den);
  r.canonicalize();
  return r;
}

inline int sign(const Rational& r) { return sgn(r); }

/// A rational table rewritten as integer numerators over one common
/// denominator. Comparisons of sums and products can then be done in
/// integer arithmetic.
struct ScaledTable {
  std::vector<Integer> numerators;
  Integer denominator{1};
};

inline ScaledTable scale_to_integers(std::span<const Rational> table) {
  ScaledTable out;
  for (const auto& v : table) mpz_lcm(out.denominator.get_mpz_t(), out.denominator.get_mpz_t(), v.get_den_mpz_t());
  out.numerators.reserve(table.size());
  for (const auto& v : table) {
    Integer n = v.get_num() * (out.denominator / v.get_den());
    out.numerators.push_back(std::move(n));
  }
  return out;
}

/// Throws unless lo < r < hi.
inline void require_open_interval(const Rational& r, const Rational& lo, const Rational& hi, std::string_view what) {
  if (!(r > lo && r < hi))
    throw std::invalid_argument(std::string(what) + " = " + to_string(r) + " must lie strictly between " +
                                to_string(lo) + " and " + to_string(hi));
}

}  // namespace ccorr

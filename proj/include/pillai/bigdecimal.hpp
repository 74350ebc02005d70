#pragma once

// Base-10 fixed point numbers and natural logarithms with explicit error
// radii. A BigDecimal is mantissa * 10^exponent; `precision` records how many
// significant digits the producer guarantees.

#include <string>

#include "pillai/arith.hpp"

namespace pillai::arith {

struct BigDecimal {
  Integer mantissa = 0;
  long exponent = 0;
  long precision = 0;

  static BigDecimal from_integer(const Integer& n);
  // Parses "[-]digits[.digits]" exactly.
  static BigDecimal parse(const std::string& text);

  // Nearest integer, ties toward +infinity.
  Integer round() const;
  Integer floor() const;
  Integer ceil() const;
  // Rescales to exactly `digits` fractional digits, truncating toward -inf.
  BigDecimal with_fraction_digits(long digits) const;
  std::string to_string() const;
  // At most `digits` fractional digits, truncated.
  std::string to_string(long digits) const;
  int sign() const { return sgn(mantissa); }
};

BigDecimal operator+(const BigDecimal& a, const BigDecimal& b);
BigDecimal operator-(const BigDecimal& a, const BigDecimal& b);
BigDecimal operator*(const BigDecimal& a, const BigDecimal& b);
BigDecimal operator-(const BigDecimal& a);
// Quotient truncated toward -inf at `digits` fractional digits.
BigDecimal divide(const BigDecimal& a, const BigDecimal& b, long digits);
int compare(const BigDecimal& a, const BigDecimal& b);
inline bool operator<(const BigDecimal& a, const BigDecimal& b) { return compare(a, b) < 0; }
inline bool operator==(const BigDecimal& a, const BigDecimal& b) { return compare(a, b) == 0; }

// Closed interval [mid - rad, mid + rad] * 10^-scale. Every operation keeps
// the true value inside.
struct Interval {
  Integer mid = 0;
  Integer rad = 0;
  long scale = 0;

  static Interval exact(const Integer& n, long scale);
  Integer lower_scaled() const { return mid - rad; }
  Integer upper_scaled() const { return mid + rad; }
  // floor of the lower end and ceil of the upper end, as integers.
  Integer floor_lower() const;
  Integer ceil_upper() const;
  bool contains_integer(const Integer& n) const;
  BigDecimal midpoint() const;
  BigDecimal radius() const;
};

Interval operator+(const Interval& a, const Interval& b);
Interval operator-(const Interval& a, const Interval& b);
Interval operator*(const Interval& a, const Integer& k);
Interval operator*(const Interval& a, const Interval& b);
// Requires the divisor interval to exclude zero.
Interval divide(const Interval& a, const Interval& b);

// ln(n) as an interval of width at most 2 ulps at 10^-digits. n >= 1.
Interval log_interval(const Natural& n, long digits);

// ln(n) correct to `digits` fractional digits (error below one unit in the
// last place). n >= 2, digits >= 50.
BigDecimal big_log(const Natural& n, long digits);
// ln(p) - ln(q); exactly zero when p == q. p, q >= 1.
BigDecimal big_log_ratio(const Natural& p, const Natural& q, long digits);

// Default working precisions; the log test honours PILLAI_LOG_DIGITS.
inline constexpr long kLogTestDigits = 1100;
inline constexpr long kDefaultDigits = 120;
long default_log_test_digits();

}  // namespace pillai::arith

#include "pillai/bigdecimal.hpp"

#include <cstdlib>
#include <stdexcept>

namespace pillai::arith {

namespace {

Natural pow10(long k) { return pow(Natural(10), static_cast<unsigned long>(k)); }

Integer floor_div(const Integer& a, const Integer& b) {
  Integer q;
  mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return q;
}

Integer ceil_div(const Integer& a, const Integer& b) {
  Integer q;
  mpz_cdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return q;
}

BigDecimal rescaled(const BigDecimal& v, long exponent) {
  // Exact when lowering the exponent.
  BigDecimal out = v;
  out.mantissa = v.mantissa * pow10(v.exponent - exponent);
  out.exponent = exponent;
  return out;
}

std::pair<BigDecimal, BigDecimal> aligned(const BigDecimal& a, const BigDecimal& b) {
  const long e = std::min(a.exponent, b.exponent);
  return {rescaled(a, e), rescaled(b, e)};
}

Interval raise_scale(const Interval& v, long scale) {
  const Natural f = pow10(scale - v.scale);
  return {v.mid * f, v.rad * f, scale};
}

// Drops `k` decimal places from an interval, widening the radius so the
// true value stays inside.
Interval lower_scale(const Interval& v, long k) {
  if (k <= 0) return v;
  const Natural f = pow10(k);
  return {floor_div(v.mid, f), ceil_div(v.rad, f) + 1, v.scale - k};
}

long decimal_digits(const Integer& n) {
  return static_cast<long>(mpz_sizeinbase(n.get_mpz_t(), 10));
}

// atanh(1/k) * unit; error at most 2 * (number of terms) units.
Integer atanh_inverse(unsigned long k, const Natural& unit) {
  const Natural k2 = Natural(k) * k;
  Integer term = unit / k;
  Integer sum = 0;
  for (unsigned long j = 1; term != 0; j += 2) {
    sum += term / j;
    term /= k2;
  }
  return sum;
}

// ln 2 * unit, from 18 atanh(1/26) - 2 atanh(1/4801) + 8 atanh(1/8749).
Integer ln2_scaled(const Natural& unit) {
  return 18 * atanh_inverse(26, unit) - 2 * atanh_inverse(4801, unit) +
         8 * atanh_inverse(8749, unit);
}

// ln(n) * 10^work with absolute error well under 10^guard units, where the
// caller picks work = digits + guard.
Integer ln_scaled(const Natural& n, long work) {
  if (n == 1) return 0;
  const Natural unit = pow10(work);
  // Pick e with n / 2^e in [1/sqrt 2, sqrt 2) so |z| <= 0.172.
  long e = static_cast<long>(mpz_sizeinbase(n.get_mpz_t(), 2)) - 1;
  Natural two_e = Natural(1) << e;
  if (n * n >= (Natural(1) << (2 * e + 1))) {
    ++e;
    two_e <<= 1;
  }
  const Integer num = Integer(n) - two_e;
  const Integer den = Integer(n) + two_e;
  Integer sum = 0;
  if (num != 0) {
    Integer power = num * unit / den;
    const Integer z2 = num * num * unit / (den * den);
    for (unsigned long j = 1; power != 0; j += 2) {
      sum += power / j;
      power = power * z2 / unit;
    }
  }
  return 2 * sum + e * ln2_scaled(unit);
}

long guard_digits(const Natural& n) {
  // Series truncation costs a few units per term; e * ln2 multiplies the
  // constant's error by e <= bit length of n.
  return 12 + decimal_digits(Integer(mpz_sizeinbase(n.get_mpz_t(), 2))) + 4;
}

}  // namespace

BigDecimal BigDecimal::from_integer(const Integer& n) {
  return {n, 0, decimal_digits(n)};
}

BigDecimal BigDecimal::parse(const std::string& text) {
  std::string digits;
  long exponent = 0;
  bool seen_point = false;
  std::size_t i = 0;
  bool negative = false;
  if (i < text.size() && (text[i] == '-' || text[i] == '+')) negative = text[i++] == '-';
  for (; i < text.size(); ++i) {
    const char ch = text[i];
    if (ch == '.' && !seen_point) {
      seen_point = true;
    } else if (ch >= '0' && ch <= '9') {
      digits.push_back(ch);
      if (seen_point) --exponent;
    } else {
      throw std::invalid_argument("BigDecimal: bad character in '" + text + "'");
    }
  }
  if (digits.empty()) throw std::invalid_argument("BigDecimal: empty number");
  Integer m(digits, 10);
  if (negative) m = -m;
  return {m, exponent, static_cast<long>(digits.size())};
}

Integer BigDecimal::floor() const {
  if (exponent >= 0) return mantissa * pow10(exponent);
  return floor_div(mantissa, pow10(-exponent));
}

Integer BigDecimal::ceil() const {
  if (exponent >= 0) return mantissa * pow10(exponent);
  return ceil_div(mantissa, pow10(-exponent));
}

Integer BigDecimal::round() const {
  if (exponent >= 0) return mantissa * pow10(exponent);
  const Natural f = pow10(-exponent);
  // floor(x + 1/2): ties go up.
  return floor_div(2 * mantissa + f, 2 * f);
}

BigDecimal BigDecimal::with_fraction_digits(long digits) const {
  if (-exponent <= digits) return rescaled(*this, -digits);
  BigDecimal out = *this;
  out.mantissa = floor_div(mantissa, pow10(-exponent - digits));
  out.exponent = -digits;
  return out;
}

std::string BigDecimal::to_string() const {
  const long frac = exponent < 0 ? -exponent : 0;
  return to_string(frac);
}

std::string BigDecimal::to_string(long digits) const {
  BigDecimal v = with_fraction_digits(std::max(0L, std::min(digits, std::max(0L, -exponent))));
  const long frac = -v.exponent;
  Integer m = v.mantissa;
  const bool negative = m < 0;
  if (negative) m = -m;
  std::string s = m.get_str();
  if (frac > 0) {
    if (static_cast<long>(s.size()) <= frac) s.insert(0, frac - s.size() + 1, '0');
    s.insert(s.size() - frac, ".");
  }
  return negative ? "-" + s : s;
}

BigDecimal operator+(const BigDecimal& a, const BigDecimal& b) {
  auto [x, y] = aligned(a, b);
  return {x.mantissa + y.mantissa, x.exponent, std::min(a.precision, b.precision)};
}

BigDecimal operator-(const BigDecimal& a, const BigDecimal& b) {
  auto [x, y] = aligned(a, b);
  return {x.mantissa - y.mantissa, x.exponent, std::min(a.precision, b.precision)};
}

BigDecimal operator-(const BigDecimal& a) { return {-a.mantissa, a.exponent, a.precision}; }

BigDecimal operator*(const BigDecimal& a, const BigDecimal& b) {
  return {a.mantissa * b.mantissa, a.exponent + b.exponent, std::min(a.precision, b.precision)};
}

BigDecimal divide(const BigDecimal& a, const BigDecimal& b, long digits) {
  if (b.mantissa == 0) throw std::domain_error("BigDecimal: division by zero");
  // a/b = (ma/mb) * 10^(ea-eb); scale the numerator so the quotient lands
  // at 10^-digits.
  const long shift = digits + a.exponent - b.exponent;
  Integer num = a.mantissa;
  Integer den = b.mantissa;
  if (shift >= 0) num *= pow10(shift);
  else den *= pow10(-shift);
  return {floor_div(num, den), -digits, digits};
}

int compare(const BigDecimal& a, const BigDecimal& b) {
  auto [x, y] = aligned(a, b);
  return cmp(x.mantissa, y.mantissa) < 0 ? -1 : (x.mantissa == y.mantissa ? 0 : 1);
}

Interval Interval::exact(const Integer& n, long scale) { return {n * pow10(scale), 0, scale}; }

Integer Interval::floor_lower() const { return floor_div(mid - rad, pow10(scale)); }
Integer Interval::ceil_upper() const { return ceil_div(mid + rad, pow10(scale)); }

bool Interval::contains_integer(const Integer& n) const {
  const Integer v = n * pow10(scale);
  return mid - rad <= v && v <= mid + rad;
}

BigDecimal Interval::midpoint() const { return {mid, -scale, scale}; }
BigDecimal Interval::radius() const { return {rad, -scale, scale}; }

Interval operator+(const Interval& a, const Interval& b) {
  const long s = std::max(a.scale, b.scale);
  Interval x = raise_scale(a, s), y = raise_scale(b, s);
  return {x.mid + y.mid, x.rad + y.rad, s};
}

Interval operator-(const Interval& a, const Interval& b) {
  const long s = std::max(a.scale, b.scale);
  Interval x = raise_scale(a, s), y = raise_scale(b, s);
  return {x.mid - y.mid, x.rad + y.rad, s};
}

Interval operator*(const Interval& a, const Integer& k) {
  return {a.mid * k, a.rad * abs(k), a.scale};
}

Interval operator*(const Interval& a, const Interval& b) {
  const long s = std::max(a.scale, b.scale);
  Interval x = raise_scale(a, s), y = raise_scale(b, s);
  Interval wide{x.mid * y.mid, abs(x.mid) * y.rad + abs(y.mid) * x.rad + x.rad * y.rad, 2 * s};
  return lower_scale(wide, s);
}

Interval divide(const Interval& a, const Interval& b) {
  const long s = std::max(a.scale, b.scale);
  Interval x = raise_scale(a, s), y = raise_scale(b, s);
  const Integer mb = abs(y.mid);
  if (mb <= y.rad) throw std::domain_error("Interval: divisor straddles zero");
  const Natural f = pow10(s);
  const Integer mid = floor_div(x.mid * f, y.mid);
  // |x/y - mx/my| <= (rx|my| + |mx| ry) / (|my| (|my| - ry)), in units of
  // 10^-s after multiplying by f; one more unit covers the floor.
  const Integer err = ceil_div((x.rad * mb + abs(x.mid) * y.rad) * f, mb * (mb - y.rad)) + 1;
  return {mid, err, s};
}

Interval log_interval(const Natural& n, long digits) {
  if (n < 1) throw std::invalid_argument("log_interval: n must be >= 1");
  if (n == 1) return {0, 0, digits};
  const long guard = guard_digits(n);
  const Integer wide = ln_scaled(n, digits + guard);
  // Truncation error of ln_scaled is far below one unit after dropping the
  // guard digits; radius 2 covers it plus the floor.
  return {floor_div(wide, pow10(guard)), 2, digits};
}

BigDecimal big_log(const Natural& n, long digits) {
  if (n <= 1) throw std::invalid_argument("big_log: n must be >= 2");
  if (digits < 1) throw std::invalid_argument("big_log: digits must be positive");
  const long guard = guard_digits(n);
  const Integer wide = ln_scaled(n, digits + guard);
  const Natural f = pow10(guard);
  return {floor_div(2 * wide + f, 2 * f), -digits, digits};
}

BigDecimal big_log_ratio(const Natural& p, const Natural& q, long digits) {
  if (p < 1 || q < 1) throw std::invalid_argument("big_log_ratio: arguments must be >= 1");
  if (p == q) return {0, -digits, digits};
  const long guard = std::max(guard_digits(p), guard_digits(q));
  const Integer wide = ln_scaled(p, digits + guard) - ln_scaled(q, digits + guard);
  const Natural f = pow10(guard);
  return {floor_div(2 * wide + f, 2 * f), -digits, digits};
}

long default_log_test_digits() {
  if (const char* env = std::getenv("PILLAI_LOG_DIGITS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v >= 50) return v;
  }
  return kLogTestDigits;
}

}  // namespace pillai::arith

#include <functional>
#include <stdexcept>

#include "pillai/eliminate.hpp"

namespace pillai::eliminate {

using arith::BigDecimal;
using arith::Interval;
using arith::pow;

std::string to_string(LogVerdict v) {
  switch (v) {
    case LogVerdict::non_integer: return "non_integer";
    case LogVerdict::integer_candidate: return "integer_candidate";
    case LogVerdict::precision_insufficient: return "precision_insufficient";
  }
  return "?";
}

namespace {

Integer fdiv(const Integer& a, const Integer& b) {
  Integer q;
  mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return q;
}

Integer cdiv(const Integer& a, const Integer& b) {
  Integer q;
  mpz_cdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return q;
}

// Scaled upper bound for 2 z / log(base) with z = c / (s b^n), using
// log(base) > 0.69. Empty when z >= 1/2, where the estimate |log(1 +- z)| <
// 2z is not available.
std::optional<Integer> tolerance_scaled(const Instance& in, const Integer& n, const Integer& f) {
  if (n < 0) return std::nullopt;
  const Integer numer = 200 * in.c * f;
  const unsigned long numer_bits = mpz_sizeinbase(numer.get_mpz_t(), 2);
  if (n > Integer(numer_bits + 4)) return Integer(1);  // b^n alone swamps the numerator
  const Natural sbn = in.s * pow(in.b, n.get_ui());
  if (2 * in.c >= sbn) return std::nullopt;
  return std::max(Integer(1), cdiv(numer, 69 * sbn));
}

LogTestResult decide(const Interval& v, long digits,
                     const std::function<std::optional<Integer>(const Integer&)>& tau) {
  LogTestResult out;
  out.digits = digits;
  out.value = v.midpoint();
  out.hypothesis_holds = true;
  const Integer f = pow(Natural(10), static_cast<unsigned long>(v.scale));
  const Integer mu = pow(Natural(10), static_cast<unsigned long>(std::max(0L, v.scale - digits + 10)));

  out.nearest = fdiv(2 * v.mid + f, 2 * f);
  auto dist = [&](const Integer& n) -> Integer { return abs(v.mid - n * f); };
  {
    Integer lo = dist(out.nearest) - v.rad;
    if (lo < 0) lo = 0;
    out.residual = BigDecimal{lo, -v.scale, digits};
  }

  // A solution at n sits within 2z/log(base) < 1.45 of the value.
  const Integer first = fdiv(v.lower_scaled(), f) - 2, last = cdiv(v.upper_scaled(), f) + 2;
  std::optional<Integer> candidate;
  bool ambiguous = false;
  for (Integer n = first; n <= last; ++n) {
    if (n < 0) continue;
    const auto t = tau(n);
    if (!t) {
      out.hypothesis_holds = false;
      continue;
    }
    const Integer eff = std::max(*t, mu);
    const Integer d = dist(n);
    if (d + v.rad <= eff) {
      if (!candidate || dist(n) < dist(*candidate)) candidate = n;
    } else if (d - v.rad <= eff) {
      ambiguous = true;
    }
  }
  if (candidate) {
    out.verdict = LogVerdict::integer_candidate;
    out.nearest = *candidate;
  } else {
    out.verdict = ambiguous ? LogVerdict::precision_insufficient : LogVerdict::non_integer;
  }
  return out;
}

long working_digits(long digits, const Natural& given) {
  if (digits < 20) throw std::invalid_argument("log test: need at least 20 digits");
  return digits + static_cast<long>(mpz_sizeinbase(given.get_mpz_t(), 10)) + 5;
}

}  // namespace

LogTestResult log_test_y(const Instance& in, const Natural& x4, long digits, Tolerance tol) {
  in.validate();
  const long w = working_digits(digits, x4);
  const Interval la = arith::log_interval(in.a, w), lb = arith::log_interval(in.b, w);
  const Interval lrs = arith::log_interval(in.r, w) - arith::log_interval(in.s, w);
  const Interval v = arith::divide(la * x4 + lrs, lb);
  const Integer f = pow(Natural(10), static_cast<unsigned long>(v.scale));
  if (tol == Tolerance::negligible) return decide(v, digits, [](const Integer&) { return Integer(0); });
  return decide(v, digits, [&](const Integer& n) { return tolerance_scaled(in, n, f); });
}

LogTestResult log_test_x(const Instance& in, const Natural& y4, long digits, Tolerance tol) {
  in.validate();
  const long w = working_digits(digits, y4);
  const Interval la = arith::log_interval(in.a, w), lb = arith::log_interval(in.b, w);
  const Interval lsr = arith::log_interval(in.s, w) - arith::log_interval(in.r, w);
  const Interval v = arith::divide(lb * y4 + lsr, la);
  const Integer f = pow(Natural(10), static_cast<unsigned long>(v.scale));
  if (tol == Tolerance::negligible) return decide(v, digits, [](const Integer&) { return Integer(0); });
  // Here z = c / (s b^y4) is fixed by the given y4; the bound divides by
  // log a instead of log b.
  const auto t = tolerance_scaled(in, y4, f);
  return decide(v, digits, [&](const Integer&) { return t; });
}

}  // namespace pillai::eliminate

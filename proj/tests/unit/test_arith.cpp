#include "doctest.h"

#include <mpfr.h>

#include <random>

#include "pillai/arith.hpp"
#include "pillai/bigdecimal.hpp"

using namespace pillai::arith;

namespace {

// Independent oracle: MPFR's log at a generous binary precision, printed
// to `digits` decimals (truncated).
std::string mpfr_log_digits(const Natural& n, long digits) {
  mpfr_t x;
  mpfr_init2(x, static_cast<mpfr_prec_t>((digits + 40) * 3.33));
  mpfr_set_z(x, n.get_mpz_t(), MPFR_RNDN);
  mpfr_log(x, x, MPFR_RNDN);
  mpfr_exp_t exp10 = 0;
  char* s = mpfr_get_str(nullptr, &exp10, 10, digits + 30, x, MPFR_RNDN);
  std::string digits_str(s);
  mpfr_free_str(s);
  mpfr_clear(x);
  // ln n > 0 here; insert the point and truncate.
  std::string out = digits_str.substr(0, exp10) + "." + digits_str.substr(exp10);
  if (exp10 <= 0) out = "0." + std::string(-exp10, '0') + digits_str;
  return out.substr(0, out.find('.') + 1 + digits);
}

std::uint64_t brute_order(std::uint64_t n, std::uint64_t m) {
  std::uint64_t v = n % m, k = 1;
  while (v != 1 % m) {
    v = v * (n % m) % m;
    ++k;
  }
  return k;
}

}  // namespace

TEST_CASE("mult_order examples") {
  CHECK(mult_order(2, 7) == 3);
  CHECK(mult_order(1, 97) == 1);
  CHECK(mult_order(10, 7) == 6);
  CHECK_THROWS_AS(mult_order(6, 9), std::invalid_argument);
  CHECK(mult_order(-1, 5) == 2);
}

TEST_CASE("mult_order agrees with a scan on a grid") {
  for (std::uint64_t m = 2; m <= 400; ++m)
    for (std::uint64_t n = 1; n <= 60; ++n) {
      if (std::gcd(n, m) != 1) continue;
      REQUIRE(mult_order(Integer(static_cast<unsigned long>(n)), Natural(static_cast<unsigned long>(m))) ==
              static_cast<unsigned long>(brute_order(n, m)));
    }
  // Composite modulus of the s*b^y3 shape.
  CHECK(mult_order(3, Natural(2) * pow(Natural(2), 10)) == 512);
}

TEST_CASE("valuation") {
  CHECK(valuation(2, 48) == 4);
  CHECK(valuation(3, 7) == 0);
  CHECK(valuation(2, 3 + 1) == 2);
  CHECK(valuation(10, 12000) == 3);
  CHECK_THROWS_AS(valuation(2, 0), std::invalid_argument);
}

TEST_CASE("hensel_lift examples") {
  CHECK(hensel_lift(1, 1, 5, 1, 2) == 1);
  CHECK(hensel_lift(1, 0, 5, 4, 2) == 24);
  CHECK(hensel_lift(2, 0, 5, 2, 2) == 7);
  CHECK_THROWS_AS(hensel_lift(2, 0, 5, 1, 2), std::invalid_argument);
  CHECK_THROWS_AS(hensel_lift(2, 0, 2, 1, 2), std::invalid_argument);
  // x^5 - 1 mod 5: root 1 has derivative 5 = 0.
  CHECK_THROWS_AS(hensel_lift(5, 1, 5, 1, 2), std::invalid_argument);
}

TEST_CASE("hensel_lift matches residue scans for small primes") {
  for (unsigned long p : {3ul, 5ul, 7ul, 11ul, 13ul, 17ul, 19ul, 23ul, 29ul, 31ul, 37ul, 41ul, 43ul, 47ul}) {
    for (unsigned long n = 1; n <= (p - 1) / 2; ++n) {
      if (((p - 1) / 2) % n) continue;
      for (int alpha = 0; alpha <= 1; ++alpha)
        for (unsigned long a0 = 1; a0 < p; ++a0) {
          const long sgn = alpha ? -1 : 1;
          Natural v = (pow(Natural(a0), n) + sgn) % p;
          if (v != 0) continue;
          for (unsigned long k = 1; k <= 5; ++k) {
            Natural h = hensel_lift(n, alpha, p, a0, k);
            const Natural pk = pow(Natural(p), k);
            Natural r = (pow(Natural(h), n) + sgn) % pk;
            REQUIRE(r == 0);
            REQUIRE(h % p == a0);
            // Uniqueness: exactly one residue mod p^k above a0.
            if (k <= 3) {
              int count = 0;
              for (Natural t = a0; t < pk; t += p)
                if ((pow(Natural(t), n) + sgn) % pk == 0) ++count;
              REQUIRE(count == 1);
            }
          }
        }
    }
  }
}

TEST_CASE("factor examples") {
  CHECK(factor(84) == Factorization{{2, 2}, {3, 1}, {7, 1}});
  const Natural m61 = pow(Natural(2), 61) - 1;
  CHECK(factor(m61) == Factorization{{m61, 1}});
  const Natural n = pow(Natural(1477), 3) + 1;
  Natural product = 1;
  for (const auto& pp : factor(n)) {
    CHECK(is_prime(pp.prime));
    product *= pow(pp.prime, pp.exponent);
  }
  CHECK(product == n);
  CHECK(n == Natural(1478) * (Natural(1477) * 1477 - 1477 + 1));
  CHECK(n % 1478 == 0);
}

TEST_CASE("factor reconstructs every n up to 2e5") {
  for (unsigned long n = 2; n <= 200000; ++n) {
    Natural product = 1;
    Natural last = 0;
    for (const auto& pp : factor(n)) {
      REQUIRE(pp.prime > last);
      last = pp.prime;
      unsigned long p = pp.prime.get_ui();
      bool prime = p >= 2;
      for (unsigned long d = 2; d * d <= p && prime; ++d) prime = p % d != 0;
      REQUIRE(prime);
      product *= pow(pp.prime, pp.exponent);
    }
    REQUIRE(product == n);
  }
}

TEST_CASE("factor handles 40-digit semiprimes and the effort cap") {
  const Natural p("1000000000000000003"), q("100000000000000000039");
  REQUIRE(is_prime(p));
  REQUIRE(is_prime(q));
  CHECK(factor(p * 1000003) == Factorization{{1000003, 1}, {p, 1}});
  FactorOptions tiny;
  tiny.rho_iterations = 10;
  CHECK_THROWS_AS(factor(p * q, tiny), FactorTimeout);
  try {
    factor(Natural(12) * p * q, tiny);
  } catch (const FactorTimeout& e) {
    CHECK(e.partial() == Factorization{{2, 2}, {3, 1}});
    CHECK(e.cofactors() == std::vector<Natural>{p * q});
  }
}

TEST_CASE("is_prime against known values") {
  CHECK(is_prime(Natural("3317044064679887385961981")) == false);  // strong pseudoprime to bases < 41
  CHECK(is_prime(Natural("170141183460469231731687303715884105727")));  // 2^127 - 1
  CHECK_FALSE(is_prime(Natural("170141183460469231731687303715884105729")));
}

TEST_CASE("is_perfect_power") {
  CHECK(is_perfect_power(8) == PerfectPower{2, 3});
  CHECK(is_perfect_power(36) == PerfectPower{6, 2});
  CHECK_FALSE(is_perfect_power(56744).has_value());
  CHECK(is_perfect_power(64) == PerfectPower{2, 6});
  for (unsigned long m = 2; m <= 100; ++m) {
    const PerfectPower root = minimal_root(m);
    for (unsigned long k = 2; k <= 6; ++k) {
      REQUIRE(is_perfect_power(pow(Natural(m), k)) == PerfectPower{root.base, k * root.exponent});
    }
  }
}

TEST_CASE("divisors") {
  CHECK(divisors(factor(12)) == std::vector<Natural>{1, 2, 3, 4, 6, 12});
}

TEST_CASE("big_log frozen digits and MPFR oracle") {
  CHECK(big_log_ratio(5, 5, 60).mantissa == 0);
  const BigDecimal l2 = big_log(2, 60);
  CHECK(l2.to_string(30) == "0.693147180559945309417232121458");
  const BigDecimal ratio = divide(big_log(3, 80), big_log(2, 80), 60);
  CHECK(ratio.to_string(29) == "1.58496250072115618145373894394");
  CHECK(l2.to_string(58) == mpfr_log_digits(2, 58));
  CHECK(big_log(3, 200).to_string(195) == mpfr_log_digits(3, 195));
  CHECK_THROWS_AS(big_log(1, 60), std::invalid_argument);
}

TEST_CASE("big_log agrees with MPFR on a pseudorandom sample") {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 60; ++i) {
    Natural n = rng();
    n = (n << (rng() % 70)) + 2;
    const long d = 50 + static_cast<long>(rng() % 200);
    // One-ulp error allowed at the last place; compare to d-2 digits.
    const std::string ours = big_log(n, d).to_string(d - 2);
    const std::string ref = mpfr_log_digits(n, d - 2);
    const std::string more = big_log(n, d + 20).to_string(d - 2);
    REQUIRE(ours.size() == ref.size());
    // Truncations may differ by one in the last place only at a carry.
    if (ours != ref) CHECK(big_log(n, d + 40).to_string(d - 2) == ref);
    CHECK(more == ref);
  }
}

TEST_CASE("log_interval contains the MPFR value") {
  for (unsigned long n : {2ul, 3ul, 7ul, 1477ul, 56744ul, 999983ul}) {
    const Interval iv = log_interval(n, 100);
    const BigDecimal ref = BigDecimal::parse(mpfr_log_digits(n, 140));
    const BigDecimal lo{iv.mid - iv.rad, -100, 100}, hi{iv.mid + iv.rad, -100, 100};
    CHECK(compare(lo, ref) <= 0);
    CHECK(compare(ref, hi) <= 0);
  }
  const Interval q = divide(log_interval(3, 60), log_interval(2, 60));
  CHECK(q.midpoint().to_string(25) == "1.5849625007211561814537389");
}

TEST_CASE("BigDecimal rounding and parsing") {
  CHECK(BigDecimal::parse("2.5").round() == 3);
  CHECK(BigDecimal::parse("-2.5").round() == -2);
  CHECK(BigDecimal::parse("-2.25").floor() == -3);
  CHECK(BigDecimal::parse("-2.25").ceil() == -2);
  CHECK(BigDecimal::parse("0.0012").to_string() == "0.0012");
  CHECK((BigDecimal::parse("1.5") * BigDecimal::parse("-0.2")).to_string() == "-0.30");
  CHECK(divide(BigDecimal::parse("1"), BigDecimal::parse("3"), 5).to_string() == "0.33333");
}

#include "doctest.h"

#include <map>

#include "pillai/bounds.hpp"

using namespace pillai::bounds;
using namespace pillai::model;
using pillai::arith::Natural;
using pillai::arith::pow;

namespace {

// Independent b^{sigma_b(a)}: least n by plain loop, valuations by repeated
// division of the full power.
Natural oracle_b_sigma(unsigned long a, unsigned long b) {
  Natural out = 1;
  unsigned long rest = b;
  for (unsigned long p = 2; p <= rest; ++p) {
    if (rest % p) continue;
    while (rest % p == 0) rest /= p;
    unsigned long n = 1, t = a % p;
    while (t != 1 && t != p - 1) t = t * a % p, ++n;
    const Natural an = pow(Natural(a), n);
    unsigned long best = 0;
    for (int d : {1, -1}) {
      Natural v = an + d;
      unsigned long g = 0;
      while (v != 0 && v % p == 0) v /= p, ++g;
      best = std::max(best, g);
    }
    out *= pow(Natural(p), best);
  }
  return out;
}

// Least a >= 2 coprime to b with b^sigma >= threshold, scanning up to limit;
// 0 when none.
unsigned long oracle_min_a(unsigned long b, const Natural& threshold, unsigned long limit) {
  for (unsigned long a = 2; a <= limit; ++a)
    if (std::gcd(a, b) == 1 && oracle_b_sigma(a, b) >= threshold) return a;
  return 0;
}

}  // namespace

TEST_CASE("sigma examples") {
  auto c = sigma(2, 3);
  REQUIRE(c.entries.size() == 1);
  CHECK(c.entries[0].n == 1);
  CHECK(c.entries[0].g == 2);
  CHECK(c.A_sigma == 4);

  c = sigma(3, 2);
  CHECK(c.entries[0].n == 1);
  CHECK(c.entries[0].g == 1);
  CHECK(c.A_sigma == 3);

  c = sigma(6, 5);
  REQUIRE(c.entries.size() == 2);
  CHECK(c.entries[0].g == 2);
  CHECK(c.entries[1].g == 1);
  CHECK(c.A_sigma == 12);
  CHECK(check_sigma(c));

  CHECK_THROWS_AS(sigma(6, 4), std::invalid_argument);
}

TEST_CASE("sigma conclusion holds for the worked examples up to y = 10^4") {
  for (auto [a, b] : {std::pair{2, 3}, {3, 2}, {6, 5}}) {
    const Natural A = sigma(a, b).A_sigma;
    const Natural mod = pow(Natural(a), 40);
    Natural by = 1;
    for (unsigned long y = 1; y <= 10000; ++y) {
      by = by * b % mod;
      for (int d : {1, -1}) {
        Natural v = (by + d) % mod;
        unsigned long x = 0;
        while (x < 40 && v % a == 0) v /= a, ++x;
        REQUIRE(x < 40);
        CHECK((A * y) % pow(Natural(a), x) == 0);
      }
    }
  }
}

TEST_CASE("sigma divisibility property for a, b <= 30") {
  int exceptions = 0;
  for (unsigned long a = 2; a <= 30; ++a)
    for (unsigned long b = 2; b <= 30; ++b) {
      if (std::gcd(a, b) != 1) continue;
      const auto cert = sigma(a, b);
      CHECK(check_sigma(cert));
      for (unsigned long y = 0; y <= 12; ++y)
        for (int d : {1, -1}) {
          const Natural v = pow(Natural(b), y) + d;
          for (unsigned long x = 0; x <= 12; ++x) {
            const Natural ax = pow(Natural(a), x);
            if (v % ax == 0 && (cert.A_sigma * y) % ax != 0) ++exceptions;
          }
        }
      CHECK(b_sigma(b, a) == oracle_b_sigma(b, a));
    }
  CHECK(exceptions == 0);
}

TEST_CASE("lifted roots") {
  for (unsigned long k = 1; k <= 5; ++k) {
    const Natural m = pow(Natural(7), k);
    for (unsigned long n : {1ul, 3ul})
      for (int alpha : {0, 1}) {
        std::vector<Natural> brute;
        for (Natural x = 1; x < m; ++x) {
          Natural t;
          mpz_powm_ui(t.get_mpz_t(), x.get_mpz_t(), n, m.get_mpz_t());
          if ((t + (alpha ? -1 : 1)) % m == 0) brute.push_back(x);
        }
        CHECK(lifted_roots(7, n, alpha, k) == brute);
      }
  }
  CHECK(lifted_roots(2, 1, 0, 4) == std::vector<Natural>{15});
  CHECK(lifted_roots(2, 1, 1, 4) == std::vector<Natural>{1});
}

TEST_CASE("sigma_scan examples") {
  auto rep = sigma_scan(3, 243, 1000);
  CHECK(rep.min_a == oracle_min_a(3, 243, 2000));
  CHECK(rep.clean == (rep.min_a > 1000));

  rep = sigma_scan(5, 5, 2);
  CHECK_FALSE(rep.clean);
  CHECK(rep.min_a == 2);  // 2^2 = -1 mod 5

  rep = sigma_scan(15, 10000, 1000000);
  CHECK(rep.primes == std::vector<Natural>{3, 5});
  CHECK(rep.branches.size() > 1);
  const unsigned long brute = oracle_min_a(15, 10000, 200000);
  REQUIRE(brute != 0);
  CHECK(rep.min_a == brute);
  CHECK_FALSE(rep.clean);
  CHECK(to_json(rep)["verdict"] == "not clean");
}

TEST_CASE("sigma_scan matches exhaustive enumeration for b <= 30") {
  const unsigned long limit = 3000;
  for (unsigned long b = 2; b <= 30; ++b)
    for (const Natural& t : {Natural(10), Natural(1000), Natural(100000)}) {
      CAPTURE(b);
      CAPTURE(t.get_str());
      const auto rep = sigma_scan(b, t, limit);
      const unsigned long brute = oracle_min_a(b, t, limit);
      if (brute) {
        CHECK(rep.min_a == brute);
      } else {
        CHECK(rep.min_a > limit);
        CHECK(oracle_b_sigma(rep.min_a.get_ui(), b) >= t);
      }
    }
}

TEST_CASE("sigma_scan verdict is monotone") {
  for (unsigned long b : {3ul, 6ul, 10ul, 21ul, 30ul}) {
    bool prev_clean = false;
    for (Natural t = b; t < 100000000; t *= 7) {
      const bool clean = sigma_scan(b, t, 50000).clean;
      CHECK((!prev_clean || clean));
      prev_clean = clean;
    }
    bool prev_dirty = false;
    for (Natural bound = 10; bound < 10000000; bound *= 10) {
      const bool dirty = !sigma_scan(b, 1000000, bound).clean;
      CHECK((!prev_dirty || dirty));
      prev_dirty = dirty;
    }
  }
}

TEST_CASE("sigma_ceiling") {
  for (unsigned long b : {2ul, 3ul, 10ul, 97ul}) {
    const Natural t = sigma_ceiling(b, 100000);
    CHECK(sigma_scan(b, t, 100000).clean);
    if (t > b) CHECK_FALSE(sigma_scan(b, t / b, 100000).clean);
  }
}

TEST_CASE("sigma divisibility cut") {
  CHECK(sigma_divisibility_cut(4, 2, 1000000) == 21);
  CHECK(sigma_divisibility_cut(4, 2, 1) == 2);
  CHECK(sigma_divisibility_cut(1, 10, 999) == 2);
}

TEST_CASE("z bounds") {
  const auto zb = z_bounds(parse_set("(3,2,5,1,2; 0,1,1,0,2,1,3,4)"));
  CHECK(zb.Z == 4);
  CHECK(zb.a_gap_power == 3);
  CHECK(zb.possible());

  // a^(x3 - x2) > Z
  CHECK_FALSE(z_bounds(SolutionSet{{3, 2, 5, 1, 2}, {{0, 1, 0, 0}, {1, 0, 0, 0}, {3, 1, 0, 0}, {4, 4, 0, 0}}})
                  .gap_ok);
  // s > Z + 1
  CHECK_FALSE(z_bounds(SolutionSet{{3, 2, 5, 1, 7}, {{0, 1, 0, 0}, {1, 0, 0, 0}, {2, 1, 0, 0}, {3, 4, 0, 0}}})
                  .s_ok);
  CHECK_THROWS_AS(z_bounds(parse_set("(3,2,5,1,2; 0,1,1,0,2,1)")), std::invalid_argument);
}

TEST_CASE("z bounds accept every four-solution sub-configuration of the rows") {
  int checked = 0;
  for (const auto& row : theorem1_rows()) {
    const auto& in = row.instance;
    if (pillai::arith::gcd(in.r * in.a, in.s * in.b) != 1) continue;
    const auto& sols = row.solutions;
    const std::size_t n = sols.size();
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j)
        for (std::size_t k = j + 1; k < n; ++k)
          for (std::size_t l = k + 1; l < n; ++l) {
            SolutionSet sub{in, {sols[i], sols[j], sols[k], sols[l]}};
            std::sort(sub.solutions.begin(), sub.solutions.end());
            bool distinct = true;
            for (std::size_t q = 1; q < 4; ++q) distinct &= sub.solutions[q - 1].x != sub.solutions[q].x;
            if (!distinct) continue;
            CHECK(z_bounds(sub).possible());
            ++checked;
          }
  }
  CHECK(checked > 0);
}

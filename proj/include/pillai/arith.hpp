#pragma once

// Exact integer utilities used by every other module: multiplicative orders,
// valuations, Hensel lifting, factorization and perfect-power detection.

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <gmpxx.h>

namespace pillai::arith {

using Integer = mpz_class;
// Natural is an Integer that is nonnegative by contract.
using Natural = mpz_class;

struct PrimePower {
  Natural prime;
  unsigned long exponent = 0;

  bool operator==(const PrimePower&) const = default;
};

// Primes strictly increasing, product of prime^exponent equals the input.
using Factorization = std::vector<PrimePower>;

struct FactorOptions {
  // Trial division runs over all primes up to this bound.
  unsigned long trial_bound = 1'000'000;
  // Pollard-Brent iterations allowed per composite cofactor.
  std::uint64_t rho_iterations = 100'000'000;
};

// Raised when a composite cofactor survives the rho effort cap. Carries the
// primes found so far and the unfactored remainder.
class FactorTimeout : public std::runtime_error {
 public:
  FactorTimeout(Factorization partial, std::vector<Natural> cofactors);

  const Factorization& partial() const { return partial_; }
  const std::vector<Natural>& cofactors() const { return cofactors_; }

 private:
  Factorization partial_;
  std::vector<Natural> cofactors_;
};

Natural pow(const Natural& base, unsigned long exponent);
Natural gcd(const Integer& a, const Integer& b);
Natural lcm(const Natural& a, const Natural& b);

// Product of prime^exponent.
Natural expand(const Factorization& f);

// Miller-Rabin. Deterministic (first 13 prime bases) below 3.3e24,
// otherwise 64 rounds with bases drawn from a generator seeded by n.
bool is_prime(const Natural& n);

// Complete factorization of n >= 2. Throws FactorTimeout when a cofactor
// resists the configured rho effort.
Factorization factor(const Natural& n, const FactorOptions& options = {});

// Best-effort factorization: every prime it can find, plus whatever
// composite cofactors were left when the effort cap hit. Never throws.
struct PartialFactorization {
  Factorization primes;
  std::vector<Natural> cofactors;

  bool complete() const { return cofactors.empty(); }
};
PartialFactorization factor_partial(const Natural& n, const FactorOptions& options = {});

// All positive divisors, ascending.
std::vector<Natural> divisors(const Factorization& f);

// Least k >= 1 with n^k = 1 (mod m). Requires m >= 2 and gcd(n, m) = 1.
// Works from the factorization of m and of each p - 1, stripping prime
// factors from the group order.
Natural mult_order(const Integer& n, const Natural& m, const FactorOptions& options = {});

// Order modulo a prime power when the factorization of p - 1 is already known.
Natural mult_order_prime_power(const Integer& n, const Natural& p, unsigned long e,
                               const Factorization& p_minus_1);

// Largest e with base^e | n. base >= 2, n >= 1. For prime base this is the
// p-adic valuation.
unsigned long valuation(const Natural& base, const Natural& n);

// Unique a1 mod p^k with a1^n + (-1)^alpha = 0 (mod p^k) and a1 = a0 (mod p).
// Requires p an odd prime, a0 a simple root mod p.
Natural hensel_lift(unsigned long n, int alpha, const Natural& p, const Natural& a0,
                    unsigned long k);

struct PerfectPower {
  Natural base;
  unsigned long exponent = 0;

  bool operator==(const PerfectPower&) const = default;
};

// Representation with the largest exponent (smallest base), or nullopt when
// n is not a perfect power. n >= 2.
std::optional<PerfectPower> is_perfect_power(const Natural& n);

// Smallest root: n itself when n is not a perfect power.
PerfectPower minimal_root(const Natural& n);

// Integer k-th root if exact.
std::optional<Natural> exact_root(const Natural& n, unsigned long k);

std::string to_string(const Integer& n);
Integer parse_integer(const std::string& text);

}  // namespace pillai::arith

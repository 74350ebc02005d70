#include "pillai/arith.hpp"

#include <algorithm>
#include <map>
#include <random>
#include <sstream>

namespace pillai::arith {

FactorTimeout::FactorTimeout(Factorization partial, std::vector<Natural> cofactors)
    : std::runtime_error("factor: effort cap reached with composite cofactor"),
      partial_(std::move(partial)),
      cofactors_(std::move(cofactors)) {}

Natural pow(const Natural& base, unsigned long exponent) {
  Natural out;
  mpz_pow_ui(out.get_mpz_t(), base.get_mpz_t(), exponent);
  return out;
}

Natural gcd(const Integer& a, const Integer& b) {
  Natural g;
  mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return g;
}

Natural lcm(const Natural& a, const Natural& b) {
  Natural l;
  mpz_lcm(l.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return l;
}

Natural expand(const Factorization& f) {
  Natural out = 1;
  for (const auto& pp : f) out *= pow(pp.prime, pp.exponent);
  return out;
}

namespace {

const std::vector<unsigned long>& small_primes(unsigned long bound) {
  // Sieve once to the largest bound ever requested; the table only grows
  // at startup in practice, so a function-local static is enough.
  static const std::vector<unsigned long> table = [] {
    const unsigned long limit = 1'000'000;
    std::vector<bool> composite(limit + 1, false);
    std::vector<unsigned long> primes;
    for (unsigned long i = 2; i <= limit; ++i) {
      if (composite[i]) continue;
      primes.push_back(i);
      for (unsigned long j = i * i; j <= limit; j += i) composite[j] = true;
    }
    return primes;
  }();
  (void)bound;
  return table;
}

Natural powm(const Natural& b, const Natural& e, const Natural& m) {
  Natural out;
  mpz_powm(out.get_mpz_t(), b.get_mpz_t(), e.get_mpz_t(), m.get_mpz_t());
  return out;
}

bool miller_rabin_round(const Natural& n, const Natural& d, unsigned long s, const Natural& base) {
  Natural x = powm(base, d, n);
  if (x == 1 || x == n - 1) return true;
  for (unsigned long i = 1; i < s; ++i) {
    x = x * x % n;
    if (x == n - 1) return true;
    if (x == 1) return false;
  }
  return false;
}

void add_prime(std::map<Natural, unsigned long, std::less<>>& acc, const Natural& p,
               unsigned long e) {
  acc[p] += e;
}

// Brent's variant of Pollard rho with batched gcds. Returns a nontrivial
// factor, or 0 when the iteration budget runs out.
Natural rho_brent(const Natural& n, std::uint64_t& budget, unsigned long seed) {
  if (mpz_even_p(n.get_mpz_t())) return 2;
  std::mt19937_64 rng(seed);
  auto draw = [&](const Natural& bound) {
    Natural v = rng();
    v = (v << 64) + rng();
    return Natural(v % bound);
  };
  while (budget > 0) {
    Natural y = draw(n - 1) + 1;
    Natural c = draw(n - 1) + 1;
    const std::uint64_t m = 128;
    Natural g = 1, q = 1, x, ys;
    std::uint64_t r = 1;
    while (g == 1) {
      x = y;
      for (std::uint64_t i = 0; i < r; ++i) y = (y * y + c) % n;
      std::uint64_t k = 0;
      while (k < r && g == 1) {
        ys = y;
        const std::uint64_t lim = std::min(m, r - k);
        for (std::uint64_t i = 0; i < lim; ++i) {
          y = (y * y + c) % n;
          Natural diff = x > y ? Natural(x - y) : Natural(y - x);
          q = q * diff % n;
        }
        g = gcd(q, n);
        k += lim;
        budget = budget > lim ? budget - lim : 0;
        if (budget == 0 && g == 1) return 0;
      }
      r *= 2;
    }
    if (g == n) {
      // Backtrack one step at a time from the saved point.
      do {
        ys = (ys * ys + c) % n;
        Natural diff = x > ys ? Natural(x - ys) : Natural(ys - x);
        g = gcd(diff, n);
        if (budget > 0) --budget;
      } while (g == 1);
    }
    if (g != n) return g;
  }
  return 0;
}

void split(const Natural& n, const FactorOptions& options,
           std::map<Natural, unsigned long, std::less<>>& acc, std::vector<Natural>& stuck) {
  if (n == 1) return;
  if (is_prime(n)) {
    add_prime(acc, n, 1);
    return;
  }
  if (auto pp = is_perfect_power(n)) {
    for (unsigned long i = 0; i < pp->exponent; ++i) split(pp->base, options, acc, stuck);
    return;
  }
  std::uint64_t budget = options.rho_iterations;
  Natural d = rho_brent(n, budget, mpz_get_ui(n.get_mpz_t()));
  if (d == 0) {
    stuck.push_back(n);
    return;
  }
  split(d, options, acc, stuck);
  split(n / d, options, acc, stuck);
}

}  // namespace

bool is_prime(const Natural& n) {
  if (n < 2) return false;
  static const unsigned long bases[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41};
  for (unsigned long p : bases) {
    if (n == p) return true;
    if (mpz_divisible_ui_p(n.get_mpz_t(), p)) return false;
  }
  Natural d = n - 1;
  unsigned long s = mpz_scan1(d.get_mpz_t(), 0);
  mpz_tdiv_q_2exp(d.get_mpz_t(), d.get_mpz_t(), s);

  static const Natural deterministic_limit("3317044064679887385961981");
  if (n < deterministic_limit) {
    for (unsigned long p : bases)
      if (!miller_rabin_round(n, d, s, Natural(p))) return false;
    return true;
  }
  std::seed_seq seq{mpz_get_ui(n.get_mpz_t()), mpz_sizeinbase(n.get_mpz_t(), 2)};
  std::mt19937_64 rng(seq);
  for (int round = 0; round < 64; ++round) {
    Natural base = rng();
    base = base % (n - 3) + 2;
    if (!miller_rabin_round(n, d, s, base)) return false;
  }
  return true;
}

PartialFactorization factor_partial(const Natural& n, const FactorOptions& options) {
  if (n < 2) throw std::invalid_argument("factor: n must be >= 2");
  std::map<Natural, unsigned long, std::less<>> acc;
  Natural rest = n;
  for (unsigned long p : small_primes(options.trial_bound)) {
    if (p > options.trial_bound) break;
    if (Natural(p) * p > rest) break;
    if (mpz_divisible_ui_p(rest.get_mpz_t(), p)) {
      unsigned long e = 0;
      while (mpz_divisible_ui_p(rest.get_mpz_t(), p)) {
        mpz_divexact_ui(rest.get_mpz_t(), rest.get_mpz_t(), p);
        ++e;
      }
      add_prime(acc, Natural(p), e);
    }
  }
  std::vector<Natural> stuck;
  if (rest > 1) split(rest, options, acc, stuck);

  PartialFactorization out;
  for (auto& [p, e] : acc) out.primes.push_back({p, e});
  std::sort(stuck.begin(), stuck.end());
  out.cofactors = std::move(stuck);
  return out;
}

Factorization factor(const Natural& n, const FactorOptions& options) {
  PartialFactorization pf = factor_partial(n, options);
  if (!pf.complete()) throw FactorTimeout(std::move(pf.primes), std::move(pf.cofactors));
  return pf.primes;
}

std::vector<Natural> divisors(const Factorization& f) {
  std::vector<Natural> out{1};
  for (const auto& pp : f) {
    const std::size_t base_count = out.size();
    Natural power = 1;
    for (unsigned long e = 1; e <= pp.exponent; ++e) {
      power *= pp.prime;
      for (std::size_t i = 0; i < base_count; ++i) out.push_back(out[i] * power);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

Natural mult_order_prime_power(const Integer& n, const Natural& p, unsigned long e,
                               const Factorization& p_minus_1) {
  const Natural m = pow(p, e);
  Natural residue = n % m;
  if (residue < 0) residue += m;
  // Group order of (Z/p^e)^* is p^(e-1)(p-1); strip each prime while the
  // power stays 1.
  Factorization group = p_minus_1;
  if (e > 1) {
    auto it = std::find_if(group.begin(), group.end(),
                           [&](const PrimePower& q) { return q.prime == p; });
    if (it == group.end()) {
      group.push_back({p, e - 1});
      std::sort(group.begin(), group.end(),
                [](const PrimePower& l, const PrimePower& r) { return l.prime < r.prime; });
    } else {
      it->exponent += e - 1;
    }
  }
  Natural order = expand(group);
  for (const auto& q : group) {
    for (unsigned long i = 0; i < q.exponent; ++i) {
      Natural candidate = order / q.prime;
      if (powm(residue, candidate, m) != 1) break;
      order = candidate;
    }
  }
  return order;
}

Natural mult_order(const Integer& n, const Natural& m, const FactorOptions& options) {
  if (m < 2) throw std::invalid_argument("mult_order: modulus must be >= 2");
  if (gcd(n, m) != 1) throw std::invalid_argument("mult_order: gcd(n, m) != 1");
  Natural order = 1;
  for (const auto& pp : factor(m, options)) {
    Factorization pm1 = pp.prime == 2 ? Factorization{} : factor(pp.prime - 1, options);
    order = lcm(order, mult_order_prime_power(n, pp.prime, pp.exponent, pm1));
  }
  return order;
}

unsigned long valuation(const Natural& base, const Natural& n) {
  if (n <= 0) throw std::invalid_argument("valuation: n must be >= 1");
  if (base < 2) throw std::invalid_argument("valuation: base must be >= 2");
  Natural rest;
  return mpz_remove(rest.get_mpz_t(), n.get_mpz_t(), base.get_mpz_t());
}

Natural hensel_lift(unsigned long n, int alpha, const Natural& p, const Natural& a0,
                    unsigned long k) {
  if (n == 0) throw std::invalid_argument("hensel_lift: n must be >= 1");
  if (k == 0) throw std::invalid_argument("hensel_lift: k must be >= 1");
  if (p < 3 || mpz_even_p(p.get_mpz_t()) || !is_prime(p))
    throw std::invalid_argument("hensel_lift: p must be an odd prime");
  const Natural sign = alpha == 0 ? Natural(1) : Natural(-1);
  auto f = [&](const Natural& x, const Natural& mod) {
    Natural v = (powm(x, n, mod) + sign) % mod;
    if (v < 0) v += mod;
    return v;
  };
  Natural root = a0 % p;
  if (root < 0) root += p;
  if (f(root, p) != 0) throw std::invalid_argument("hensel_lift: a0 is not a root mod p");
  Natural deriv = Natural(n) * powm(root, n - 1, p) % p;
  if (deriv == 0) throw std::invalid_argument("hensel_lift: singular derivative at a0");

  // Newton step x <- x - f(x)/f'(x) doubles the precision each round.
  unsigned long have = 1;
  while (have < k) {
    const unsigned long want = std::min(2 * have, k);
    const Natural mod = pow(p, want);
    Natural fx = f(root, mod);
    Natural d = Natural(n) * powm(root, n - 1, mod) % mod;
    Natural inv;
    mpz_invert(inv.get_mpz_t(), d.get_mpz_t(), mod.get_mpz_t());
    root = (root - fx * inv) % mod;
    if (root < 0) root += mod;
    have = want;
  }
  return root % pow(p, k);
}

std::optional<Natural> exact_root(const Natural& n, unsigned long k) {
  Natural r;
  if (mpz_root(r.get_mpz_t(), n.get_mpz_t(), k) != 0) return r;
  return std::nullopt;
}

std::optional<PerfectPower> is_perfect_power(const Natural& n) {
  if (n < 2) throw std::invalid_argument("is_perfect_power: n must be >= 2");
  const unsigned long top = mpz_sizeinbase(n.get_mpz_t(), 2);
  for (unsigned long k = top; k >= 2; --k) {
    if (auto r = exact_root(n, k); r && *r >= 2) return PerfectPower{*r, k};
  }
  return std::nullopt;
}

PerfectPower minimal_root(const Natural& n) {
  if (auto pp = is_perfect_power(n)) return *pp;
  return {n, 1};
}

std::string to_string(const Integer& n) { return n.get_str(); }

Integer parse_integer(const std::string& text) {
  std::string t = text;
  while (!t.empty() && std::isspace(static_cast<unsigned char>(t.back()))) t.pop_back();
  std::size_t start = 0;
  while (start < t.size() && std::isspace(static_cast<unsigned char>(t[start]))) ++start;
  t = t.substr(start);
  Integer out;
  if (t.empty() || out.set_str(t, 10) != 0)
    throw std::invalid_argument("not an integer: '" + text + "'");
  return out;
}

}  // namespace pillai::arith

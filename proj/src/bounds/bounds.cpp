#include "pillai/bounds.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace pillai::bounds {

using arith::gcd;
using arith::pow;
using model::Integer;

ZBounds z_bounds(const SolutionSet& set) {
  if (set.solutions.size() != 4) throw std::invalid_argument("z_bounds: need exactly four solutions");
  const auto& in = set.instance;
  if (gcd(in.r * in.a, in.s * in.b) != 1) throw std::invalid_argument("z_bounds: gcd(ra, sb) != 1");
  std::vector<model::Solution> sols = set.solutions;
  std::sort(sols.begin(), sols.end());
  for (std::size_t i = 1; i < sols.size(); ++i)
    if (sols[i - 1].x >= sols[i].x) throw std::invalid_argument("z_bounds: x values must be distinct");
  ZBounds out;
  out.Z = sols[3].x;
  for (const auto& s : sols) out.Z = std::max(out.Z, s.y);
  out.a_gap_power = pow(in.a, sols[2].x - sols[1].x);
  out.gap_ok = out.a_gap_power <= out.Z;
  out.s_ok = in.s <= out.Z + 1;
  return out;
}

namespace {

// v_p(t) for t = b^n + delta without forming b^n in full.
unsigned long valuation_of_power_shift(const Natural& b, unsigned long n, int delta, const Natural& p) {
  unsigned long width = 8;
  for (;;) {
    const Natural mod = pow(p, width);
    Natural t;
    mpz_powm_ui(t.get_mpz_t(), b.get_mpz_t(), n, mod.get_mpz_t());
    t = (t + delta) % mod;
    if (t < 0) t += mod;
    if (t != 0) return arith::valuation(p, t);
    width *= 2;
  }
}

}  // namespace

SigmaCertificate sigma(const Natural& a, const Natural& b) {
  if (a < 2 || b < 2) throw std::invalid_argument("sigma: a, b must exceed 1");
  if (gcd(a, b) != 1) throw std::invalid_argument("sigma: gcd(a, b) > 1");
  SigmaCertificate cert{a, b, {}, 1};
  for (const auto& pp : arith::factor(a)) {
    SigmaEntry e;
    e.p = pp.prime;
    const Natural o = arith::mult_order(b, pp.prime);
    // Least n with b^n = +-1: the order, or half of it when even (then
    // b^(o/2) = -1 modulo an odd prime).
    const Natural n = (pp.prime != 2 && o % 2 == 0) ? Natural(o / 2) : o;
    if (!n.fits_ulong_p()) throw std::overflow_error("sigma: order too large");
    e.n = n.get_ui();
    const unsigned long gp = valuation_of_power_shift(b, e.n, +1, pp.prime);
    const unsigned long gm = valuation_of_power_shift(b, e.n, -1, pp.prime);
    e.g = std::max(gp, gm);
    e.sign = gp >= gm ? +1 : -1;
    cert.A_sigma *= pow(e.p, e.g);
    cert.entries.push_back(e);
  }
  return cert;
}

bool check_sigma(const SigmaCertificate& cert) {
  Natural product = 1;
  Natural rest = cert.a;
  for (const auto& e : cert.entries) {
    if (!arith::is_prime(e.p) || cert.a % e.p != 0) return false;
    while (rest % e.p == 0) rest /= e.p;
    // n minimal: no smaller exponent gives +-1.
    for (unsigned long m = 1; m < e.n && m < 100000; ++m) {
      Natural t;
      mpz_powm_ui(t.get_mpz_t(), cert.b.get_mpz_t(), m, e.p.get_mpz_t());
      if (t == 1 || t == e.p - 1) return false;
    }
    const unsigned long gp = valuation_of_power_shift(cert.b, e.n, +1, e.p);
    const unsigned long gm = valuation_of_power_shift(cert.b, e.n, -1, e.p);
    if (std::max(gp, gm) != e.g || e.g == 0) return false;
    product *= pow(e.p, e.g);
  }
  return rest == 1 && product == cert.A_sigma;
}

nlohmann::json to_json(const SigmaCertificate& cert) {
  nlohmann::json entries = nlohmann::json::array();
  for (const auto& e : cert.entries)
    entries.push_back({{"p", model::natural_to_json(e.p)}, {"n", e.n}, {"g", e.g}, {"sign", e.sign}});
  return {{"a", model::natural_to_json(cert.a)},
          {"b", model::natural_to_json(cert.b)},
          {"entries", entries},
          {"A_sigma", model::natural_to_json(cert.A_sigma)}};
}

std::vector<Natural> lifted_roots(const Natural& p, unsigned long n, int alpha, unsigned long k) {
  std::vector<Natural> out;
  if (p == 2) {
    if (n != 1) throw std::invalid_argument("lifted_roots: p = 2 needs n = 1");
    const Natural m = pow(2, k);
    out.push_back(alpha == 0 ? Natural(m - 1) : Natural(1));
    return out;
  }
  if (p > 10'000'000) throw std::invalid_argument("lifted_roots: prime too large to scan");
  const unsigned long pu = p.get_ui();
  const unsigned long target = alpha == 0 ? pu - 1 : 1;  // a0^n = -(-1)^alpha
  for (unsigned long a0 = 1; a0 < pu; ++a0) {
    Natural t;
    mpz_powm_ui(t.get_mpz_t(), Natural(a0).get_mpz_t(), n, p.get_mpz_t());
    if (t == target) out.push_back(arith::hensel_lift(n, alpha, p, a0, k));
  }
  std::sort(out.begin(), out.end());
  return out;
}

namespace {

struct Tagged {
  Natural residue;
  unsigned long n;
  int alpha;
};

// Residues mod p^k over all n | (p-1)/2 and both signs, deduplicated,
// tagged with the smallest n producing each.
std::vector<Tagged> residues_for(const Natural& p, unsigned long k) {
  std::map<Natural, Tagged> seen;
  std::vector<unsigned long> ns;
  if (p == 2) {
    ns.push_back(1);
  } else {
    const unsigned long half = (p.get_ui() - 1) / 2;
    for (unsigned long n = 1; n <= half; ++n)
      if (half % n == 0) ns.push_back(n);
  }
  for (unsigned long n : ns)
    for (int alpha = 0; alpha <= 1; ++alpha)
      for (const auto& r : lifted_roots(p, n, alpha, k))
        seen.emplace(r, Tagged{r, n, alpha});
  std::vector<Tagged> out;
  for (auto& [r, t] : seen) out.push_back(t);
  return out;
}

Natural least_at_least_two(const Natural& residue, const Natural& modulus) {
  Natural a = residue % modulus;
  while (a < 2) a += modulus;
  return a;
}

unsigned long least_exponent_reaching(const Natural& p, const Natural& factor, const Natural& threshold) {
  unsigned long k = 1;
  Natural v = p * factor;
  while (v < threshold) {
    v *= p;
    ++k;
  }
  return k;
}

}  // namespace

SigmaScanReport sigma_scan(const Natural& b, const Natural& threshold, const Natural& a_bound) {
  if (b < 2) throw std::invalid_argument("sigma_scan: b must exceed 1");
  SigmaScanReport rep;
  rep.b = b;
  rep.threshold = threshold;
  rep.a_bound = a_bound;
  for (const auto& pp : arith::factor(b)) rep.primes.push_back(pp.prime);
  const std::size_t m = rep.primes.size();
  if (m > 4) throw std::invalid_argument("sigma_scan: b has more than four distinct primes");

  // Exponent caps for the larger primes: ceiling so that a prime whose own
  // power already reaches the threshold is covered.
  std::vector<unsigned long> caps(m, 1);
  for (std::size_t i = 1; i < m; ++i) caps[i] = least_exponent_reaching(rep.primes[i], 1, threshold);

  std::map<std::pair<Natural, unsigned long>, std::vector<Tagged>> cache;
  auto classes = [&](std::size_t i, unsigned long k) -> const std::vector<Tagged>& {
    auto key = std::pair{rep.primes[i], k};
    auto it = cache.find(key);
    if (it == cache.end()) it = cache.emplace(key, residues_for(rep.primes[i], k)).first;
    return it->second;
  };

  rep.min_a = 0;
  std::vector<unsigned long> ks(m, 1);
  for (;;) {
    Natural others = 1;
    for (std::size_t i = 1; i < m; ++i) others *= pow(rep.primes[i], ks[i]);
    ks[0] = least_exponent_reaching(rep.primes[0], others, threshold);

    // CRT over the per-prime class lists.
    SigmaBranch best;
    best.k = ks;
    best.modulus = 1;
    for (std::size_t i = 0; i < m; ++i) best.modulus *= pow(rep.primes[i], ks[i]);
    best.min_a = 0;
    std::vector<const std::vector<Tagged>*> lists;
    for (std::size_t i = 0; i < m; ++i) lists.push_back(&classes(i, ks[i]));
    std::vector<std::size_t> idx(m, 0);
    for (;;) {
      Natural residue = 0, mod = 1;
      for (std::size_t i = 0; i < m; ++i) {
        const Natural pk = pow(rep.primes[i], ks[i]);
        const Natural& ri = (*lists[i])[idx[i]].residue;
        // residue + mod * t = ri (mod pk)
        Natural inv;
        mpz_invert(inv.get_mpz_t(), mod.get_mpz_t(), pk.get_mpz_t());
        Natural t = ((ri - residue) % pk) * inv % pk;
        if (t < 0) t += pk;
        residue += mod * t;
        mod *= pk;
      }
      ++rep.classes_checked;
      const Natural a = least_at_least_two(residue, mod);
      if (best.min_a == 0 || a < best.min_a) {
        best.min_a = a;
        best.n.clear();
        best.alpha.clear();
        for (std::size_t i = 0; i < m; ++i) {
          best.n.push_back((*lists[i])[idx[i]].n);
          best.alpha.push_back((*lists[i])[idx[i]].alpha);
        }
      }
      std::size_t i = 0;
      while (i < m && ++idx[i] == lists[i]->size()) idx[i++] = 0;
      if (i == m) break;
    }
    if (rep.min_a == 0 || best.min_a < rep.min_a) rep.min_a = best.min_a;
    rep.branches.push_back(std::move(best));

    std::size_t i = 1;
    while (i < m && ++ks[i] > caps[i]) ks[i++] = 1;
    if (i >= m) break;
  }
  rep.clean = rep.min_a > a_bound;
  return rep;
}

nlohmann::json to_json(const SigmaScanReport& rep) {
  nlohmann::json branches = nlohmann::json::array();
  for (const auto& br : rep.branches)
    branches.push_back({{"k", br.k},
                        {"n", br.n},
                        {"alpha", br.alpha},
                        {"modulus", model::natural_to_json(br.modulus)},
                        {"min_a", model::natural_to_json(br.min_a)}});
  nlohmann::json primes = nlohmann::json::array();
  for (const auto& p : rep.primes) primes.push_back(model::natural_to_json(p));
  return {{"b", model::natural_to_json(rep.b)},
          {"threshold", model::natural_to_json(rep.threshold)},
          {"a_bound", model::natural_to_json(rep.a_bound)},
          {"primes", primes},
          {"branches", branches},
          {"min_a", model::natural_to_json(rep.min_a)},
          {"classes_checked", rep.classes_checked},
          {"verdict", rep.clean ? "clean" : "not clean"}};
}

unsigned long sigma_divisibility_cut(const Natural& b_sigma, const Natural& b, const Natural& gap_bound) {
  if (b < 2) throw std::invalid_argument("sigma_divisibility_cut: b must exceed 1");
  const Natural limit = b_sigma * gap_bound;
  unsigned long y = 0;
  Natural v = b;
  while (v <= limit) {
    v *= b;
    ++y;
  }
  return y;
}

Natural sigma_ceiling(const Natural& b, const Natural& a_bound) {
  Natural t = b;
  for (int guard = 0; guard < 400; ++guard, t *= b)
    if (sigma_scan(b, t, a_bound).clean) return t;
  throw std::runtime_error("sigma_ceiling: no clean threshold found");
}

}  // namespace pillai::bounds

#pragma once

// A priori cuts on the search space: the Z-bounds for four-solution
// configurations, the sigma divisibility certificate, and the Hensel scan
// that bounds b^sigma over a range of a.

#include <vector>

#include "json.hpp"
#include "pillai/model.hpp"

namespace pillai::bounds {

using model::Natural;
using model::SolutionSet;

struct ZBounds {
  unsigned long Z = 0;
  Natural a_gap_power;  // a^(x3 - x2)
  bool gap_ok = false;  // a^(x3-x2) <= Z
  bool s_ok = false;    // s <= Z + 1
  bool possible() const { return gap_ok && s_ok; }
};

// Requires exactly four solutions with distinct x and gcd(ra, sb) = 1.
ZBounds z_bounds(const SolutionSet& set);

struct SigmaEntry {
  Natural p;
  unsigned long n = 0;  // least n with b^n = +-1 (mod p)
  unsigned long g = 0;  // v_p(b^n +- 1), sign maximizing
  int sign = 0;         // +1 or -1: which of b^n + 1, b^n - 1 attains g
};

// For the primes of a against powers of b: a^x | b^y +- 1 implies
// a^x | A_sigma * y, where A_sigma = prod p^g.
struct SigmaCertificate {
  Natural a, b;
  std::vector<SigmaEntry> entries;
  Natural A_sigma;
};

SigmaCertificate sigma(const Natural& a, const Natural& b);
// Re-derives every entry with valuation(); true when the certificate is
// internally consistent.
bool check_sigma(const SigmaCertificate& cert);
nlohmann::json to_json(const SigmaCertificate& cert);

// b^{sigma_b(a)} as an integer: sigma with the roles of a and b swapped.
inline Natural b_sigma(const Natural& a, const Natural& b) { return sigma(b, a).A_sigma; }

struct SigmaBranch {
  std::vector<unsigned long> k;        // exponent per prime of b
  std::vector<unsigned long> n;        // order-type exponent per prime
  std::vector<int> alpha;              // sign per prime
  Natural modulus;                     // prod p^k
  Natural min_a;                       // least a >= 2 in the surviving classes
};

struct SigmaScanReport {
  Natural b, threshold, a_bound;
  std::vector<Natural> primes;
  // One entry per exponent split, holding that split's minimal a.
  std::vector<SigmaBranch> branches;
  Natural min_a;  // minimum over all branches
  bool clean = false;
  std::size_t classes_checked = 0;
};

// Every a coprime to b with b^{sigma_b(a)} >= threshold lies in one of the
// scanned residue classes; the verdict is clean when each class's least
// representative exceeds a_bound. Odd primes use Hensel lifting of the roots
// of x^n +- 1 for n | (p-1)/2; the prime 2 uses the exact classes a = +-1
// mod 2^k. b must have at most four distinct primes.
SigmaScanReport sigma_scan(const Natural& b, const Natural& threshold, const Natural& a_bound);
nlohmann::json to_json(const SigmaScanReport& report);

// All residues a mod p^k with a^n + (-1)^alpha = 0 (mod p^k), sorted. For
// odd p, n | (p-1)/2; for p = 2, n = 1.
std::vector<Natural> lifted_roots(const Natural& p, unsigned long n, int alpha, unsigned long k);

// Largest y3 with b^y3 <= b_sigma * gap_bound, which bounds y3 whenever
// b^y3 | b_sigma * (x4 - x3) and 0 < x4 - x3 <= gap_bound.
unsigned long sigma_divisibility_cut(const Natural& b_sigma, const Natural& b,
                                     const Natural& gap_bound);

// Smallest power threshold T = b^j for which sigma_scan(b, T, a_bound) is
// clean; every a <= a_bound coprime to b then has b^{sigma_b(a)} < T.
Natural sigma_ceiling(const Natural& b, const Natural& a_bound);

}  // namespace pillai::bounds

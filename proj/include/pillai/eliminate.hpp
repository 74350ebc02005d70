#pragma once

// Ruling out a fourth solution: the order bootstrap, the rank-2 lattice bound
// on y4, and the logarithmic integrality test. Every success is packaged as a
// Certificate that verify_certificate() re-checks from its payload alone.

#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include <gmpxx.h>

#include "json.hpp"
#include "pillai/arith.hpp"
#include "pillai/bigdecimal.hpp"
#include "pillai/model.hpp"

namespace pillai::eliminate {

using arith::Integer;
using arith::Natural;
using model::Instance;
using model::Solution;
using model::SolutionSet;

class PrecisionInsufficient : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// ---- lattice ------------------------------------------------------------

struct Vec2 {
  Integer x = 0, y = 0;
  bool operator==(const Vec2&) const = default;
};

Integer dot(const Vec2& u, const Vec2& v);

struct ReducedBasis {
  Vec2 b1, b2;
};

// Lagrange-Gauss reduction: |b1| <= |b2| and |b1.b2| <= |b1|^2 / 2.
// Throws std::invalid_argument on dependent rows.
ReducedBasis gauss_lagrange_reduce(Vec2 row1, Vec2 row2);

struct LatticeBoundInput {
  Instance instance;
  Natural C;
  mpq_class S, T;
  // Upper limit asserted for c / (s b^y4); must lie in (0, 0.79].
  mpq_class hypothesis{1, 2};
  long digits = arith::kDefaultDigits;
};

struct LatticeBoundResult {
  LatticeBoundInput input;
  Vec2 a1, a2;  // rows of A
  Vec2 target;  // Y
  ReducedBasis basis;
  mpq_class b2star_norm2;
  mpq_class sigma2;
  mpq_class frac;  // distance from sigma2 to the nearest integer
  mpq_class c1, c2, c4_squared;
  bool gate = false;
  // Every solution with y <= y_max_valid, x <= x_max_valid and
  // c/(s b^y) < hypothesis has y <= y4_bound. Empty when the gate fails.
  std::optional<unsigned long> y4_bound;
  unsigned long hypothesis_floor = 0;  // least y with c/(s b^y) < hypothesis
  Natural x_max_valid, y_max_valid;
};

// Throws PrecisionInsufficient when a nearest-integer bracket cannot be
// decided at the requested digits.
LatticeBoundResult lattice_bound(const LatticeBoundInput& input);
// Retries with doubled digits, at most three times.
LatticeBoundResult lattice_bound_auto(LatticeBoundInput input);

nlohmann::json to_json(const LatticeBoundResult& r);

// ---- bootstrap ----------------------------------------------------------

struct EffortCaps {
  unsigned rounds = 12;
  // a^d +- 1 is handed to the factorer only below this many digits.
  unsigned long factor_digits = 60;
  // Candidate primes k*d + 1 (or 2kd + 1) are tried for k below this.
  unsigned long sieve_k = 2000;
  unsigned divisors_per_round = 6;
  arith::FactorOptions factor{100000, 2000000};
};

struct BootstrapStep {
  char side = 'x';        // which gap the step constrains
  bool seed = true;       // seed from s b^y3 / r a^x3, or a fold
  Natural d = 0;          // fold exponent (0 for seeds)
  Natural prime;
  unsigned long k = 1;    // modulus prime^k
  Natural order;          // ord(base, prime^k)
};

struct BootstrapState {
  Natural x0 = 1, y0 = 1;
  // Exact 2-adic valuation of the gap when a "+1" side forces it.
  std::optional<unsigned long> ex, ey;
  std::vector<BootstrapStep> history;
  std::optional<char> exceeded;
  bool contradiction = false;
  std::string note;
};

struct GapSigns {
  int gamma = 1, delta = 1;  // r a^x3 (a^X + (-1)^gamma) = s b^y3 (b^Y + (-1)^delta)
};

enum class Method { bootstrap, lattice, logtest, exhaust };
std::string to_string(Method m);
Method parse_method(const std::string& s);

struct Certificate {
  Method method = Method::exhaust;
  SolutionSet known;  // instance and the solutions the claim is relative to
  Natural bound;
  nlohmann::json payload;
  nlohmann::json constants;
};

struct CannotEliminate {
  std::string reason;
  nlohmann::json partial;
};

using Outcome = std::variant<Certificate, CannotEliminate>;

// One sign case. The anchor must be a solution of the instance and
// gcd(ra, sb) = 1. The claim: no solution (x4, y4) with x4 > x3, y4 > y3,
// max(x4, y4) <= bound and these gap signs.
Outcome bootstrap(const Instance& inst, const Solution& anchor, GapSigns signs, const Natural& bound,
                  const EffortCaps& effort = {});
// All four sign cases in one certificate.
Outcome bootstrap_all(const Instance& inst, const Solution& anchor, const Natural& bound,
                      const EffortCaps& effort = {});

// Re-runs a state from its history, checking each step. Used by the
// verifier; exposed for tests.
bool replay_bootstrap(const Instance& inst, const Solution& anchor, GapSigns signs,
                      const std::vector<BootstrapStep>& history, BootstrapState& out,
                      std::string& why);

// ---- log test -----------------------------------------------------------

enum class LogVerdict { non_integer, integer_candidate, precision_insufficient };
std::string to_string(LogVerdict v);

// from_instance: a true solution may sit 2c/(s b^y log b) away from an
// integer. negligible: c/(s b^y) is assumed below the working precision.
enum class Tolerance { from_instance, negligible };

struct LogTestResult {
  LogVerdict verdict = LogVerdict::precision_insufficient;
  Integer nearest = 0;
  arith::BigDecimal value;     // midpoint of the enclosure
  arith::BigDecimal residual;  // lower bound on the distance to `nearest`
  long digits = 0;
  bool hypothesis_holds = false;
};

// y4 = (x4 log a + log(r/s)) / log b.
LogTestResult log_test_y(const Instance& inst, const Natural& x4, long digits,
                         Tolerance tol = Tolerance::from_instance);
// x4 = (y4 log b + log(s/r)) / log a.
LogTestResult log_test_x(const Instance& inst, const Natural& y4, long digits,
                         Tolerance tol = Tolerance::from_instance);

// ---- certificates -------------------------------------------------------

// Lattice bound plus an exact scan of the small y left over. Claim: every
// solution with x <= x_max_valid and y <= y_max_valid is in `known`.
Outcome lattice_certificate(const SolutionSet& known, const LatticeBoundInput& input);
// Claim: no solution with this x4 (direction 'y') or y4 (direction 'x')
// beyond those in `known`.
Outcome logtest_certificate(const SolutionSet& known, char direction, const Natural& given,
                            long digits);
// Claim: every solution in the box is in `known`.
Certificate exhaust_certificate(const SolutionSet& known, model::Exponent x_max, model::Exponent y_max);

struct VerifyReport {
  bool ok = true;
  std::vector<std::string> reasons;
};
VerifyReport verify_certificate(const Certificate& cert);

nlohmann::json to_json(const Certificate& cert);
Certificate certificate_from_json(const nlohmann::json& j);

// All solutions with y <= y_max (x unrestricted), sorted.
std::vector<Solution> solutions_up_to_y(const Instance& inst, model::Exponent y_max);

// ---- pipeline -----------------------------------------------------------

struct EliminateConfig {
  Natural bound = 1000000;  // global exponent bound
  Natural C = 0;            // 0: chosen from bound
  mpq_class hypothesis{1, 2};
  long digits = arith::kDefaultDigits;
  EffortCaps effort;
};

// Lattice first, bootstrap on failure. `triple` holds the known solutions;
// the anchor for bootstrapping is the one with largest x.
Outcome eliminate_fourth(const SolutionSet& triple, const EliminateConfig& cfg);

Natural default_C(const Natural& bound);

}  // namespace pillai::eliminate

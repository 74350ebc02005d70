#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <stdexcept>

#include "json_util.hpp"
#include "pillai/eliminate.hpp"

namespace pillai::eliminate {

using arith::gcd;
using arith::lcm;
using arith::pow;

namespace {

Natural powm(const Natural& base, const Natural& e, const Natural& m) {
  Natural out;
  mpz_powm(out.get_mpz_t(), base.get_mpz_t(), e.get_mpz_t(), m.get_mpz_t());
  return out;
}

unsigned long v2(const Natural& n) { return n == 0 ? 0 : mpz_scan1(n.get_mpz_t(), 0); }

// (-1)^bit as an additive shift.
int shift_of(int bit) { return bit ? -1 : 1; }

// v_p(base^d + shift) without forming base^d; capped at `cap`.
unsigned long valuation_shift(const Natural& base, const Natural& d, int shift, const Natural& p,
                              unsigned long cap) {
  unsigned long width = 4;
  for (;;) {
    const unsigned long w = std::min(width, cap);
    const Natural m = pow(p, w);
    Natural t = (powm(base, d, m) + shift) % m;
    if (t < 0) t += m;
    if (t != 0) return arith::valuation(p, t);
    if (w == cap) return cap;
    width *= 2;
  }
}

struct Side {
  Natural& g0;
  std::optional<unsigned long>& e;
};

Side side_of(BootstrapState& st, char side) {
  return side == 'x' ? Side{st.x0, st.ex} : Side{st.y0, st.ey};
}

// Folds base^gap + (-1)^bit = 0 (mod p^k), with ord(base, p^k) = order, into
// the state. False on contradiction.
bool apply_step(BootstrapState& st, char side, int bit, const Natural& order, std::string& why) {
  Side s = side_of(st, side);
  if (bit == 1) {
    s.g0 = lcm(s.g0, order);
  } else {
    // base^gap = -1 forces an even order and gap = order/2 (mod order).
    if (order % 2 != 0) {
      why = std::string("odd order excludes base^gap = -1 on side ") + side;
      return false;
    }
    const Natural half = order / 2;
    const unsigned long t = v2(half);
    if (s.e && *s.e != t) {
      why = std::string("conflicting 2-adic valuations on side ") + side;
      return false;
    }
    s.e = t;
    s.g0 = lcm(s.g0, half);
  }
  if (s.e && v2(s.g0) > *s.e) {
    why = std::string("gap divisor exceeds its 2-adic valuation on side ") + side;
    return false;
  }
  return true;
}

struct Run {
  const Instance& in;
  Solution anchor;
  GapSigns signs;
  Natural bound;
  EffortCaps effort;
  BootstrapState st;
  std::set<std::tuple<char, Natural, unsigned long>> applied;
  std::set<std::pair<char, Natural>> folded;

  const Natural& base(char side) const { return side == 'x' ? in.a : in.b; }
  int bit(char side) const { return side == 'x' ? signs.gamma : signs.delta; }

  // Returns false on contradiction (state marked).
  bool add(char side, bool seed, const Natural& d, const Natural& p, unsigned long k) {
    if (bit(side) == 0 && p == 2) {
      if (k < 2) return true;
      k = 2;
    }
    if (!applied.insert({side, p, k}).second) return true;
    Natural order;
    try {
      order = arith::mult_order(base(side), pow(p, k), effort.factor);
    } catch (const arith::FactorTimeout&) {
      st.note += "order skipped for a prime whose p-1 resisted factoring; ";
      return true;
    }
    st.history.push_back({side, seed, d, p, k, order});
    std::string why;
    if (!apply_step(st, side, bit(side), order, why)) {
      st.contradiction = true;
      st.note += why;
      return false;
    }
    return true;
  }

  bool done() {
    if (st.contradiction) return true;
    if (st.x0 > bound) st.exceeded = 'x';
    else if (st.y0 > bound) st.exceeded = 'y';
    return st.exceeded.has_value();
  }

  // Seeds: p^k || M forces ord(base, p^k) to divide the gap on `side`.
  bool seed(char side, const Natural& coeff, const Natural& other_base, model::Exponent other_exp) {
    std::map<Natural, unsigned long> pk;
    for (const Natural& n : {coeff, other_base}) {
      if (n < 2) continue;
      auto part = arith::factor_partial(n, effort.factor);
      for (const auto& pp : part.primes) pk[pp.prime] = 0;
    }
    for (auto& [p, k] : pk) {
      unsigned long kc = coeff % p == 0 ? arith::valuation(p, coeff) : 0;
      unsigned long kb = other_base % p == 0 ? arith::valuation(p, other_base) * other_exp : 0;
      k = kc + kb;
      if (k == 0) continue;
      if (!add(side, true, 0, p, k)) return false;
    }
    return true;
  }

  // Exponents d with base^d + (-1)^bit dividing base^gap + (-1)^bit.
  std::vector<Natural> pool(char side) {
    const Side s = side_of(st, side);
    const Natural g0 = s.g0;
    std::vector<Natural> out;
    std::vector<Natural> small{1};
    if (g0 < 2) return {g0};
    auto part = arith::factor_partial(g0, effort.factor);
    if (part.complete()) {
      // Smallest cofactors q give the largest d = g0 / q.
      for (const auto& pp : part.primes) {
        if (bit(side) == 0 && pp.prime == 2) continue;  // d must keep the full power of 2
        std::vector<Natural> next;
        for (const Natural& q : small) {
          Natural m = q;
          for (unsigned long i = 0; i <= pp.exponent; ++i, m *= pp.prime)
            if (m <= 1000000) next.push_back(m);
        }
        small = std::move(next);
      }
      std::sort(small.begin(), small.end());
    }
    for (const Natural& q : small) {
      if (out.size() >= effort.divisors_per_round) break;
      out.push_back(g0 / q);
    }
    return out;
  }

  // Primes p with p^k | base^d + (-1)^bit on `from`, constraining `to`.
  bool fold(char from, char to, const Natural& exclude) {
    if (bit(from) == 0 && !side_of(st, from).e) return true;  // d would be unsafe
    const Natural& bs = base(from);
    const int sh = shift_of(bit(from));
    for (const Natural& d : pool(from)) {
      if (!folded.insert({from, d}).second) continue;
      std::set<Natural> primes;
      const double digits = d.get_d() * std::log10(bs.get_d());
      if (digits <= static_cast<double>(effort.factor_digits)) {
        const Natural v = pow(bs, d.get_ui()) + sh;
        if (v >= 2)
          for (const auto& pp : arith::factor_partial(v, effort.factor).primes) primes.insert(pp.prime);
      }
      const Natural step = bit(from) ? d : Natural(2 * d);
      const Natural want_minus = 1;
      for (unsigned long kk = 1; kk < effort.sieve_k; ++kk) {
        const Natural p = step * kk + 1;
        if (p < 3) continue;
        const Natural t = powm(bs, d, p);
        if (t != (sh == -1 ? want_minus : Natural(p - 1))) continue;
        if (arith::is_prime(p)) primes.insert(p);
      }
      for (const Natural& p : primes) {
        if (exclude % p == 0) continue;
        const unsigned long k = valuation_shift(bs, d, sh, p, 64);
        if (k == 0) continue;
        if (!add(to, false, d, p, k)) return false;
        if (done()) return true;
      }
    }
    return true;
  }
};

nlohmann::json state_json(const BootstrapState& st) {
  nlohmann::json hist = nlohmann::json::array();
  for (const auto& h : st.history)
    hist.push_back({{"side", std::string(1, h.side)},
                    {"seed", h.seed},
                    {"d", int_json(h.d)},
                    {"p", int_json(h.prime)},
                    {"k", h.k},
                    {"order", int_json(h.order)}});
  nlohmann::json j = {{"x0", int_json(st.x0)},
                      {"y0", int_json(st.y0)},
                      {"history", hist},
                      {"contradiction", st.contradiction},
                      {"note", st.note}};
  j["ex"] = st.ex ? nlohmann::json(*st.ex) : nlohmann::json(nullptr);
  j["ey"] = st.ey ? nlohmann::json(*st.ey) : nlohmann::json(nullptr);
  j["exceeded"] = st.exceeded ? nlohmann::json(std::string(1, *st.exceeded)) : nlohmann::json(nullptr);
  return j;
}

void check_preconditions(const Instance& in, const Solution& anchor) {
  in.validate();
  if (gcd(in.r * in.a, in.s * in.b) != 1) throw std::invalid_argument("bootstrap: gcd(ra, sb) != 1");
  if (!model::evaluate(in, anchor.x, anchor.y, anchor.u, anchor.v))
    throw std::invalid_argument("bootstrap: anchor is not a solution");
}

}  // namespace

Outcome bootstrap(const Instance& in, const Solution& anchor, GapSigns signs, const Natural& bound,
                  const EffortCaps& effort) {
  check_preconditions(in, anchor);
  Run run{in, anchor, signs, bound, effort, {}, {}, {}};
  auto finish = [&]() -> Outcome {
    nlohmann::json c = state_json(run.st);
    c["gamma"] = signs.gamma;
    c["delta"] = signs.delta;
    if (!run.st.contradiction && !run.st.exceeded) return CannotEliminate{"bootstrap stalled", c};
    Certificate cert;
    cert.method = Method::bootstrap;
    cert.known = model::SolutionSet{in, {anchor}};
    cert.bound = bound;
    cert.payload = {{"anchor", {{"x", anchor.x}, {"y", anchor.y}}}, {"cases", nlohmann::json::array({c})}};
    cert.constants = {{"bound", int_json(bound)}, {"rounds", effort.rounds}, {"sieve_k", effort.sieve_k}};
    return cert;
  };

  if (!run.seed('x', in.s, in.b, anchor.y) || run.done()) return finish();
  if (!run.seed('y', in.r, in.a, anchor.x) || run.done()) return finish();
  for (unsigned round = 0; round < effort.rounds; ++round) {
    const Natural x_before = run.st.x0, y_before = run.st.y0;
    const auto ex_before = run.st.ex, ey_before = run.st.ey;
    if (!run.fold('x', 'y', in.s * in.b) || run.done()) return finish();
    if (!run.fold('y', 'x', in.r * in.a) || run.done()) return finish();
    if (run.st.x0 == x_before && run.st.y0 == y_before && run.st.ex == ex_before && run.st.ey == ey_before) {
      run.st.note += "no growth in a full round; ";
      break;
    }
  }
  return finish();
}

Outcome bootstrap_all(const Instance& in, const Solution& anchor, const Natural& bound,
                      const EffortCaps& effort) {
  Certificate all;
  nlohmann::json cases = nlohmann::json::array();
  for (int gamma : {0, 1})
    for (int delta : {0, 1}) {
      Outcome one = bootstrap(in, anchor, {gamma, delta}, bound, effort);
      if (auto* fail = std::get_if<CannotEliminate>(&one)) {
        fail->reason += " (gamma=" + std::to_string(gamma) + ", delta=" + std::to_string(delta) + ")";
        return *fail;
      }
      auto& cert = std::get<Certificate>(one);
      cases.push_back(cert.payload["cases"][0]);
      all = cert;
    }
  all.payload["cases"] = cases;
  return all;
}

bool replay_bootstrap(const Instance& in, const Solution& anchor, GapSigns signs,
                      const std::vector<BootstrapStep>& history, BootstrapState& st, std::string& why) {
  st = BootstrapState{};
  const Natural M_x = in.s * pow(in.b, anchor.y);  // constrains the x gap
  const Natural M_y = in.r * pow(in.a, anchor.x);
  for (const auto& h : history) {
    const char side = h.side;
    if (side != 'x' && side != 'y') return why = "bad side", false;
    const Natural& base = side == 'x' ? in.a : in.b;
    const int bit = side == 'x' ? signs.gamma : signs.delta;
    if (!arith::is_prime(h.prime) || h.k == 0) return why = "step prime invalid", false;
    const Natural pk = pow(h.prime, h.k);
    if (h.seed) {
      const Natural& M = side == 'x' ? M_x : M_y;
      if (M % pk != 0) return why = "seed modulus does not divide the coefficient", false;
    } else {
      // The source side is the other one: its base, sign and proven divisor.
      const char from = side == 'x' ? 'y' : 'x';
      const Natural& fb = from == 'x' ? in.a : in.b;
      const int fbit = from == 'x' ? signs.gamma : signs.delta;
      const Natural& g0 = from == 'x' ? st.x0 : st.y0;
      const auto& fe = from == 'x' ? st.ex : st.ey;
      const Natural exclude = from == 'x' ? Natural(in.s * in.b) : Natural(in.r * in.a);
      if (h.d < 1 || g0 % h.d != 0) return why = "fold exponent does not divide the proven divisor", false;
      if (fbit == 0 && (!fe || v2(h.d) != *fe)) return why = "fold exponent has the wrong 2-adic valuation", false;
      if (exclude % h.prime == 0) return why = "fold prime divides the excluded coefficient", false;
      Natural t = (powm(fb, h.d, pk) + shift_of(fbit)) % pk;
      if (t != 0) return why = "fold prime power does not divide base^d +- 1", false;
    }
    if (bit == 0 && h.prime == 2 && h.k != 2) return why = "2-adic step must use modulus 4", false;
    if (arith::mult_order(base, pk) != h.order) return why = "recorded order is wrong", false;
    std::string w;
    if (!apply_step(st, side, bit, h.order, w)) {
      st.contradiction = true;
      st.note = w;
      return true;
    }
  }
  return true;
}

}  // namespace pillai::eliminate

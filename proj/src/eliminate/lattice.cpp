#include <algorithm>
#include <stdexcept>

#include "pillai/eliminate.hpp"
#include "json_util.hpp"

namespace pillai::eliminate {

using arith::Interval;
using arith::pow;

Integer dot(const Vec2& u, const Vec2& v) { return u.x * v.x + u.y * v.y; }

namespace {

Integer det(const Vec2& u, const Vec2& v) { return u.x * v.y - u.y * v.x; }

Integer nearest(const mpq_class& q) {
  Integer out;
  const Integer num = 2 * q.get_num() + q.get_den();
  const Integer den = 2 * q.get_den();
  mpz_fdiv_q(out.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
  return out;
}

// [X] for X inside the interval; refuses when the interval straddles a
// half-integer.
Integer nearest(const Interval& v) {
  const Integer f = arith::pow(Natural(10), static_cast<unsigned long>(v.scale));
  auto round_at = [&](const Integer& m) {
    Integer out;
    const Integer num = 2 * m + f, den = 2 * f;
    mpz_fdiv_q(out.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
    return out;
  };
  const Integer lo = round_at(v.lower_scaled()), hi = round_at(v.upper_scaled());
  if (lo != hi) throw PrecisionInsufficient("nearest integer undecided at working precision");
  return lo;
}

Interval negate(const Interval& v) { return {-v.mid, v.rad, v.scale}; }

}  // namespace

ReducedBasis gauss_lagrange_reduce(Vec2 b1, Vec2 b2) {
  if (det(b1, b2) == 0) throw std::invalid_argument("gauss_lagrange_reduce: rows are dependent");
  for (;;) {
    if (dot(b1, b1) > dot(b2, b2)) std::swap(b1, b2);
    const Integer q = nearest(mpq_class(dot(b1, b2), dot(b1, b1)));
    if (q == 0) return {b1, b2};
    b2.x -= q * b1.x;
    b2.y -= q * b1.y;
  }
}

LatticeBoundResult lattice_bound(const LatticeBoundInput& in) {
  const auto& inst = in.instance;
  inst.validate();
  if (in.C < 1) throw std::invalid_argument("lattice_bound: C must be positive");
  if (in.S <= 0 || in.T <= 0) throw std::invalid_argument("lattice_bound: S and T must be positive");
  if (in.hypothesis <= 0 || in.hypothesis > mpq_class(79, 100))
    throw std::invalid_argument("lattice_bound: hypothesis must lie in (0, 0.79]");

  LatticeBoundResult out;
  out.input = in;
  const long d = in.digits;
  const Interval la = arith::log_interval(inst.a, d), lb = arith::log_interval(inst.b, d);
  const Interval lrs = arith::log_interval(inst.r, d) - arith::log_interval(inst.s, d);
  out.a1 = {1, nearest(la * in.C)};
  out.a2 = {0, nearest(negate(lb) * in.C)};
  out.target = {0, inst.r == inst.s ? Integer(0) : nearest(negate(lrs) * in.C)};

  out.basis = gauss_lagrange_reduce(out.a1, out.a2);
  const Vec2& b1 = out.basis.b1;
  const Vec2& b2 = out.basis.b2;
  const Integer n1 = dot(b1, b1);
  const Integer D = det(b1, b2);
  out.b2star_norm2 = mpq_class(D * D, n1);
  out.b2star_norm2.canonicalize();
  // Y = sigma1 b1 + sigma2 b2, Cramer's rule.
  out.sigma2 = mpq_class(det(b1, out.target), D);
  out.sigma2.canonicalize();
  out.frac = abs(out.sigma2 - mpq_class(nearest(out.sigma2)));
  out.c1 = std::max(mpq_class(1), mpq_class(mpq_class(n1) / out.b2star_norm2));
  out.c2 = mpq_class(2 * inst.c, inst.s);
  out.c2.canonicalize();
  // Squared lower bound for the distance from Y to the lattice.
  out.c4_squared = out.frac * out.frac * n1 / out.c1;

  // Validity box: x^2 <= S and (x + y + 1)/2 <= T.
  mpz_sqrt(out.x_max_valid.get_mpz_t(), Natural(floor_int(in.S)).get_mpz_t());
  {
    const Integer twice_t = floor_int(mpq_class(2 * in.T));
    out.y_max_valid = twice_t - 1 - out.x_max_valid;
    if (out.y_max_valid < 0) out.y_max_valid = 0;
  }

  // Least y with c < hypothesis * s * b^y.
  {
    Natural sb = inst.s;
    unsigned long y = 0;
    while (mpq_class(inst.c) >= in.hypothesis * sb) sb *= inst.b, ++y;
    out.hypothesis_floor = y;
  }

  out.gate = out.c4_squared > in.S + in.T * in.T;
  if (!out.gate) return out;

  // sqrt(c4^2 - S) - T from below, then the largest y with
  // b^y < C c2 / that.
  const mpq_class q = out.c4_squared - in.S;
  mpq_class root_lo;
  for (unsigned long k = 10;; k *= 2) {
    if (k > 5000) return out.gate = false, out;
    const Natural m = pow(Natural(10), k);
    Natural scaled = floor_int(q * m * m), r;
    mpz_sqrt(r.get_mpz_t(), scaled.get_mpz_t());
    root_lo = mpq_class(r, m);
    root_lo.canonicalize();
    if (root_lo > in.T) break;
  }
  const mpq_class limit = mpq_class(in.C) * out.c2 / (root_lo - in.T);
  unsigned long y = 0;
  Natural by = 1;
  if (limit <= 1) {
    out.y4_bound = 0;
    return out;
  }
  while (mpq_class(by * inst.b) < limit) by *= inst.b, ++y;
  out.y4_bound = y;
  return out;
}

LatticeBoundResult lattice_bound_auto(LatticeBoundInput in) {
  for (int attempt = 0;; ++attempt) {
    try {
      return lattice_bound(in);
    } catch (const PrecisionInsufficient&) {
      if (attempt == 3) throw;
      in.digits *= 2;
    }
  }
}

nlohmann::json to_json(const LatticeBoundResult& r) {
  auto vec = [](const Vec2& v) { return nlohmann::json::array({int_json(v.x), int_json(v.y)}); };
  nlohmann::json j = {{"A", {vec(r.a1), vec(r.a2)}},
                      {"Y", vec(r.target)},
                      {"B", {vec(r.basis.b1), vec(r.basis.b2)}},
                      {"b2star_norm2", rat_json(r.b2star_norm2)},
                      {"sigma2", rat_json(r.sigma2)},
                      {"frac_sigma2", rat_json(r.frac)},
                      {"c1", rat_json(r.c1)},
                      {"c2", rat_json(r.c2)},
                      {"c4_squared", rat_json(r.c4_squared)},
                      {"gate", r.gate},
                      {"hypothesis_floor", r.hypothesis_floor},
                      {"x_max_valid", int_json(r.x_max_valid)},
                      {"y_max_valid", int_json(r.y_max_valid)},
                      {"digits", r.input.digits}};
  j["y4_bound"] = r.y4_bound ? nlohmann::json(*r.y4_bound) : nlohmann::json(nullptr);
  return j;
}

}  // namespace pillai::eliminate

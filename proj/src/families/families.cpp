#include "pillai/families.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace pillai::families {

using arith::gcd;
using arith::pow;
using model::Instance;
using model::Integer;
using model::Pair;

namespace {

Integer sign(long e) { return (e % 2 == 0) ? Integer(1) : Integer(-1); }

Natural exact_div(const Integer& num, const Integer& den, const char* what) {
  if (den <= 0 || num <= 0 || num % den != 0)
    throw InvalidParams(std::string(what) + " is not a positive integer");
  return num / den;
}

SolutionSet build(const Natural& a, const Natural& b, const Integer& c, const Integer& r,
                  const Integer& s, std::vector<Pair> pairs) {
  if (a < 2) throw InvalidParams("a must exceed 1");
  if (b < 2) throw InvalidParams("b must exceed 1");
  if (c < 1 || r < 1 || s < 1) throw InvalidParams("c, r, s must be positive");
  std::sort(pairs.begin(), pairs.end());
  if (std::adjacent_find(pairs.begin(), pairs.end()) != pairs.end())
    throw InvalidParams("listed exponent pairs coincide");
  try {
    return model::make_set(Instance{a, b, c, r, s}, pairs);
  } catch (const std::invalid_argument& e) {
    throw InvalidParams(std::string("formula does not yield solutions: ") + e.what());
  }
}

SolutionSet gen62(const FamilyParams& p) {
  const Natural& a = p.a;
  if (a < 2) throw InvalidParams("a must exceed 1");
  if (p.d < 1 || p.k < 1) throw InvalidParams("d and k must be positive");
  const Natural ad = pow(a, p.d);
  unsigned long kd;
  if (p.half_k) {
    if (!(a == 2 && p.d == 2 && p.u == 1 && p.v == 1))
      throw InvalidParams("half-integer k needs a = d = 2 and (u,v) = (1,1)");
    if (p.k % 2 == 0) throw InvalidParams("half-integer k must have odd double");
    kd = p.k;  // (k/2) * 2
  } else {
    if (p.u == 0 && (p.k - p.v) % 2 == 0) throw InvalidParams("u = 0 needs k - v odd");
    if (p.u == 1 && p.v == 1 && ad > 3) throw InvalidParams("(u,v) = (1,1) needs a^d <= 3");
    kd = p.k * p.d;
  }
  const Natural b = exact_div(pow(a, kd) + sign(p.u + p.v), ad + sign(p.u), "b");
  const Natural h = gcd(ad + sign(p.u), b + sign(p.v));
  return build(a, b, Integer(ad * b + sign(p.u + p.v + 1)) / h, Integer(b + sign(p.v)) / h,
               Integer(ad + sign(p.u)) / h, {{0, 1}, {p.d, 0}, {kd, 2}});
}

SolutionSet gen63(const FamilyParams& p) {
  if (p.a < 2 || p.d < 1) throw InvalidParams("a must exceed 1 and d be positive");
  const Natural ad = pow(p.a, p.d);
  const Natural b = ad + sign(p.v);
  const int u = 1 - p.v;
  const Natural h = gcd(ad + sign(u), b + sign(p.v));
  return build(p.a, b, Integer(2 * ad + sign(p.v)) / h, Integer(ad + 2 * sign(p.v)) / h,
               Integer(ad + sign(p.v + 1)) / h, {{0, 0}, {p.d, 1}, {3 * p.d, 3}});
}

SolutionSet gen64(const FamilyParams& p) {
  if (p.g < 1) throw InvalidParams("g must be positive");
  const long g = static_cast<long>(p.g), v = p.v;
  // Cases taken in the printed order.
  int alpha;
  if ((g - v) % 2 == 0) alpha = 0;
  else if (g % 2 == 1 && v == 0) alpha = 1;
  else alpha = 2;
  const long e = 2 + v - alpha;
  if (e < 0 || 1 - v + alpha < 0) throw InvalidParams("negative power of two");
  const Natural two_e = pow(2, static_cast<unsigned long>(e));
  const Natural b = exact_div(pow(3, p.g) + sign(v), 2, "b");
  const Natural c = exact_div(pow(3, p.g + 1) + sign(v), two_e, "c");
  const Natural r = exact_div(3 * (pow(3, p.g - 1) + sign(v)), two_e, "r");
  const Natural s = pow(2, static_cast<unsigned long>(1 - v + alpha));
  return build(3, b, c, r, s, {{0, 1}, {1, 0}, {2 * p.g, 3}});
}

SolutionSet gen65(const FamilyParams& p) {
  if (p.g < 1) throw InvalidParams("g must be positive");
  const Natural tg = pow(2, p.g);
  return build(2, tg + sign(p.v), tg + sign(p.v + 1), 2, 1, {{0, 1}, {p.g - 1, 0}, {p.g, 1}});
}

SolutionSet gen66(const FamilyParams& p) {
  if (p.a < 2 || p.a % 2 != 0) throw InvalidParams("a must be even");
  if (p.x < 1) throw InvalidParams("x must be positive");
  const Natural ax = pow(p.a, p.x);
  const int pm = p.upper ? 1 : -1;
  return build(p.a, 2 * ax + pm, ax + pm, 2, ax - pm, {{0, 0}, {p.x, 0}, {2 * p.x, 1}});
}

SolutionSet gen67_w(const FamilyParams& p, int w) {
  if (p.a < 2) throw InvalidParams("a must exceed 1");
  if (p.x2 < 1 || p.x3 <= p.x2) throw InvalidParams("need 0 < x2 < x3");
  if (p.x3 % p.x2 != 0) throw InvalidParams("x2 must divide x3");
  const unsigned long m = mpz_odd_p(p.a.get_mpz_t()) ? 1 : 0;
  const Natural ax2 = pow(p.a, p.x2), ax3 = pow(p.a, p.x3);
  const Natural modulus = exact_div(ax2 + sign(p.t + 1), pow(2, m), "(a^x2 -+ 1)/2^m");
  if (modulus > 1) {
    Integer diff = ax3 - sign(w);
    if (diff % modulus != 0) throw InvalidParams("congruence a^x3 = (-1)^w fails");
  }
  const Natural by3 = exact_div(2 * ax3 + sign(p.t + w + 1) * ax2 + sign(w + 1),
                                ax2 + sign(p.t + 1), "b^y3");
  if (by3 < 2) throw InvalidParams("b must exceed 1");
  const auto root = arith::minimal_root(by3);
  const Natural two_m = pow(2, m);
  return build(p.a, root.base, exact_div(ax2 + sign(p.t), two_m, "c"), pow(2, 1 - m),
               exact_div(ax2 + sign(p.t + 1), two_m, "s"),
               {{0, 0}, {p.x2, 0}, {p.x3, root.exponent}});
}

SolutionSet gen67(const FamilyParams& p) {
  if (p.w >= 0) return gen67_w(p, p.w);
  try {
    return gen67_w(p, 0);
  } catch (const InvalidParams&) {
    return gen67_w(p, 1);
  }
}

SolutionSet gen68(const FamilyParams& p) {
  if (p.a < 2) throw InvalidParams("a must exceed 1");
  const Natural t = exact_div(pow(p.a, p.m) + sign(p.v), p.a + sign(p.u), "t");
  const Natural b = t * p.a;
  const Natural h = gcd(b + sign(p.v), p.a + sign(p.u));
  return build(p.a, b, Integer(p.a * (t + sign(p.u + p.v + 1))) / h,
               Integer(b + sign(p.v)) / h, Integer(p.a + sign(p.u)) / h,
               {{0, 0}, {1, 1}, {p.m + 1, 2}});
}

SolutionSet gen69(const FamilyParams& p) {
  if (p.m1 < -1 || p.m1 % 2 == 0) throw InvalidParams("m1 must be odd and >= -1");
  // 4t = 4 (2^m1 + 1) / 3, also at m1 = -1 where t = 1/2.
  const Natural four_t = p.m1 < 0 ? Natural(2) : exact_div(4 * (pow(2, p.m1) + 1), 3, "4t");
  const long mod6 = ((p.m1 % 6) + 6) % 6;
  const Natural h1 = mod6 == 5 ? 3 : 1;
  return build(2, four_t, exact_div(four_t + 4, h1, "c"), exact_div(four_t + 1, h1, "r"),
               exact_div(3, h1, "s"),
               {{0, 0}, {2, 1}, {static_cast<unsigned long>(p.m1 + 2), 2}});
}

}  // namespace

Generated10a generate_10a(const FamilyParams& p) {
  const Natural& b = p.b;
  if (b < 2) throw InvalidParams("b must exceed 1");
  if (p.d < 1 || p.k < 1) throw InvalidParams("d and k must be positive");
  if (p.u == 0 && (p.k - p.v) % 2 == 0) throw InvalidParams("u = 0 needs k - v odd");
  if (p.u == 1 && p.v != 0) throw InvalidParams("u = 1 needs v = 0");
  const Natural bd = pow(b, p.d);
  const Natural a = exact_div(pow(b, p.k * p.d) + sign(p.u + p.v), bd + sign(p.u), "a");
  const Natural h = gcd(a + sign(p.v), bd + sign(p.u));
  Generated10a out;
  out.set = build(a, b, Integer(a * bd - sign(p.u + p.v)) / h, Integer(bd + sign(p.u)) / h,
                  Integer(a + sign(p.v)) / h, {{0, p.d}, {1, 0}, {2, p.k * p.d}});
  const auto& in = out.set.instance;
  out.eq_a = Integer(in.s * bd) - in.r == in.c;
  out.eq_b = Integer(in.r * in.a) - in.s == in.c;
  return out;
}

SolutionSet generate(const FamilyParams& p) {
  if (p.u < 0 || p.u > 1 || p.v < 0 || p.v > 1 || p.t < 0 || p.t > 1 || p.w > 1)
    throw InvalidParams("sign parameters must be 0 or 1");
  switch (p.id) {
    case FamilyId::f62: return gen62(p);
    case FamilyId::f63: return gen63(p);
    case FamilyId::f64: return gen64(p);
    case FamilyId::f65: return gen65(p);
    case FamilyId::f66: return gen66(p);
    case FamilyId::f67: return gen67(p);
    case FamilyId::f68: return gen68(p);
    case FamilyId::f69: return gen69(p);
    case FamilyId::f10a: return generate_10a(p).set;
  }
  throw InvalidParams("unknown family");
}

std::string to_string(FamilyId id) {
  switch (id) {
    case FamilyId::f62: return "62";
    case FamilyId::f63: return "63";
    case FamilyId::f64: return "64";
    case FamilyId::f65: return "65";
    case FamilyId::f66: return "66";
    case FamilyId::f67: return "67";
    case FamilyId::f68: return "68";
    case FamilyId::f69: return "69";
    case FamilyId::f10a: return "10a";
  }
  return "?";
}

const std::vector<FamilyId>& all_families() {
  static const std::vector<FamilyId> ids = {FamilyId::f62, FamilyId::f63, FamilyId::f64,
                                            FamilyId::f65, FamilyId::f66, FamilyId::f67,
                                            FamilyId::f68, FamilyId::f69, FamilyId::f10a};
  return ids;
}

FamilyId parse_family_id(const std::string& text) {
  for (FamilyId id : all_families())
    if (to_string(id) == text) return id;
  throw std::invalid_argument("unknown family '" + text + "'");
}

std::string describe(const FamilyParams& p) {
  std::ostringstream os;
  os << to_string(p.id) << ":";
  switch (p.id) {
    case FamilyId::f62:
      os << " a=" << p.a << " d=" << p.d << (p.half_k ? " 2k=" : " k=") << p.k << " u=" << p.u
         << " v=" << p.v;
      break;
    case FamilyId::f63: os << " a=" << p.a << " d=" << p.d << " v=" << p.v; break;
    case FamilyId::f64:
    case FamilyId::f65: os << " g=" << p.g << " v=" << p.v; break;
    case FamilyId::f66: os << " a=" << p.a << " x=" << p.x << (p.upper ? " upper" : " lower"); break;
    case FamilyId::f67:
      os << " a=" << p.a << " x2=" << p.x2 << " x3=" << p.x3 << " t=" << p.t << " w=" << p.w;
      break;
    case FamilyId::f68: os << " a=" << p.a << " m=" << p.m << " u=" << p.u << " v=" << p.v; break;
    case FamilyId::f69: os << " m1=" << p.m1; break;
    case FamilyId::f10a:
      os << " b=" << p.b << " d=" << p.d << " k=" << p.k << " u=" << p.u << " v=" << p.v;
      break;
  }
  return os.str();
}

namespace {

std::vector<FamilyParams> box_tuples(FamilyId id, const ParamBox& box) {
  std::vector<FamilyParams> out;
  const unsigned long E = box.exp_max;
  auto base = [&] {
    FamilyParams p;
    p.id = id;
    return p;
  };
  for (int u = 0; u <= 1; ++u)
    for (int v = 0; v <= 1; ++v) {
      switch (id) {
        case FamilyId::f62:
          for (unsigned long a = 2; a <= box.a_max; ++a)
            for (unsigned long d = 1; d <= E; ++d)
              for (unsigned long k = 1; k <= E; ++k) {
                auto p = base();
                p.a = a, p.d = d, p.k = k, p.u = u, p.v = v;
                out.push_back(p);
              }
          if (u == 1 && v == 1)
            for (unsigned long k2 = 1; k2 <= 2 * E; k2 += 2) {
              auto p = base();
              p.a = 2, p.d = 2, p.k = k2, p.u = 1, p.v = 1, p.half_k = true;
              out.push_back(p);
            }
          break;
        case FamilyId::f63:
          if (u != 0) break;
          for (unsigned long a = 2; a <= box.a_max; ++a)
            for (unsigned long d = 1; d <= E; ++d) {
              auto p = base();
              p.a = a, p.d = d, p.v = v;
              out.push_back(p);
            }
          break;
        case FamilyId::f64:
        case FamilyId::f65:
          if (u != 0) break;
          for (unsigned long g = 1; g <= E; ++g) {
            auto p = base();
            p.g = g, p.v = v;
            out.push_back(p);
          }
          break;
        case FamilyId::f66:
          if (u != 0 || v != 0) break;
          for (unsigned long a = 2; a <= box.a_max; a += 2)
            for (unsigned long x = 1; x <= E; ++x)
              for (bool upper : {true, false}) {
                auto p = base();
                p.a = a, p.x = x, p.upper = upper;
                out.push_back(p);
              }
          break;
        case FamilyId::f67:
          for (unsigned long a = 2; a <= box.a_max; ++a)
            for (unsigned long x2 = 1; x2 <= E; ++x2)
              for (unsigned long x3 = 2 * x2; x3 <= 2 * E; x3 += x2) {
                auto p = base();
                p.a = a, p.x2 = x2, p.x3 = x3, p.t = u, p.w = v;
                out.push_back(p);
              }
          break;
        case FamilyId::f68:
          for (unsigned long a = 2; a <= box.a_max; ++a)
            for (unsigned long m = 0; m <= E; ++m) {
              auto p = base();
              p.a = a, p.m = m, p.u = u, p.v = v;
              out.push_back(p);
            }
          break;
        case FamilyId::f69:
          if (u != 0 || v != 0) break;
          for (long m1 = -1; m1 <= static_cast<long>(E); m1 += 2) {
            auto p = base();
            p.m1 = m1;
            out.push_back(p);
          }
          break;
        case FamilyId::f10a:
          for (unsigned long b = 2; b <= box.a_max; ++b)
            for (unsigned long d = 1; d <= E; ++d)
              for (unsigned long k = 1; k <= E; ++k) {
                auto p = base();
                p.b = b, p.d = d, p.k = k, p.u = u, p.v = v;
                out.push_back(p);
              }
          break;
      }
    }
  return out;
}

bool within_cap(const SolutionSet& set, const Natural& cap) {
  if (cap == 0) return true;
  const auto& i = set.instance;
  return i.a <= cap && i.b <= cap && i.c <= cap && i.r <= cap && i.s <= cap;
}

}  // namespace

SweepResult sweep(FamilyId id, const ParamBox& box) {
  SweepResult out;
  for (const auto& p : box_tuples(id, box)) {
    try {
      SolutionSet set = generate(p);
      if (!within_cap(set, box.value_cap)) {
        ++out.skipped["exceeds value cap"];
        continue;
      }
      out.items.push_back({p, std::move(set)});
    } catch (const InvalidParams& e) {
      ++out.skipped[e.what()];
    }
  }
  return out;
}

namespace {

// Parameter guesses for one orientation of a basic-form triple.
std::vector<FamilyParams> guesses(const SolutionSet& bf) {
  std::vector<FamilyParams> out;
  const auto pairs = bf.pairs();
  if (pairs.size() != 3) return out;
  const Natural& a0 = bf.instance.a;
  const Natural& b0 = bf.instance.b;
  std::vector<unsigned long> xs, ys;
  for (auto [x, y] : pairs) {
    xs.push_back(x);
    ys.push_back(y);
  }
  std::sort(xs.begin(), xs.end());
  std::sort(ys.begin(), ys.end());
  const unsigned long xm = xs[1], xM = xs[2];
  unsigned long xg = 0;
  for (unsigned long x : xs) xg = std::gcd(xg, x);

  auto add = [&](FamilyParams p) { out.push_back(p); };
  for (int u = 0; u <= 1; ++u)
    for (int v = 0; v <= 1; ++v) {
      if (xm > 0 && xM % xm == 0) {
        FamilyParams p;
        p.id = FamilyId::f62, p.a = a0, p.d = xm, p.k = xM / xm, p.u = u, p.v = v;
        add(p);
      }
      if (a0 == 2 && xm == 2 && xM % 2 == 1 && u == 1 && v == 1) {
        FamilyParams p;
        p.id = FamilyId::f62, p.a = 2, p.d = 2, p.k = xM, p.u = 1, p.v = 1, p.half_k = true;
        add(p);
      }
      if (u == 0 && xm > 0) {
        FamilyParams p;
        p.id = FamilyId::f63, p.a = a0, p.d = xm, p.v = v;
        add(p);
      }
      if (u == 0 && a0 == 3 && xM % 2 == 0) {
        FamilyParams p;
        p.id = FamilyId::f64, p.g = xM / 2, p.v = v;
        add(p);
      }
      if (u == 0 && a0 == 2) {
        FamilyParams p;
        p.id = FamilyId::f65, p.g = xM, p.v = v;
        add(p);
        p.id = FamilyId::f66, p.a = 2, p.x = xm, p.upper = v == 0;
        add(p);
      }
      if (u == 0 && a0 % 2 == 0 && a0 != 2 && xm > 0) {
        FamilyParams p;
        p.id = FamilyId::f66, p.a = a0, p.x = xm, p.upper = v == 0;
        add(p);
      }
      if (xm > 0 && xM % xm == 0) {
        FamilyParams p;
        p.id = FamilyId::f67, p.a = a0, p.x2 = xm, p.x3 = xM, p.t = u, p.w = v;
        add(p);
      }
      // 68 uses a itself, so try every root power a0^j with j | gcd(x).
      for (unsigned long j = 1; j <= xg; ++j) {
        if (xg % j) continue;
        for (unsigned long x : xs) {
          if (x == 0 || x % j) continue;
          FamilyParams p;
          p.id = FamilyId::f68, p.a = arith::pow(a0, j), p.m = x / j - 1, p.u = u, p.v = v;
          add(p);
        }
      }
      if (u == 0 && v == 0 && a0 == 2) {
        for (unsigned long x : xs) {
          FamilyParams p;
          p.id = FamilyId::f69, p.m1 = static_cast<long>(x) - 2;
          add(p);
        }
      }
      // 10a reads b from the y side.
      std::vector<unsigned long> ynz;
      for (unsigned long y : ys)
        if (y > 0) ynz.push_back(y);
      for (unsigned long d : ynz)
        for (unsigned long kd : ynz)
          if (kd % d == 0) {
            FamilyParams p;
            p.id = FamilyId::f10a, p.b = b0, p.d = d, p.k = kd / d, p.u = u, p.v = v;
            add(p);
          }
    }
  return out;
}

}  // namespace

std::optional<FamilyMatch> matches_family(const SolutionSet& triple) {
  if (triple.pair_count() != 3) return std::nullopt;
  SolutionSet bf;
  try {
    bf = model::to_basic_form(triple);
  } catch (const model::BasicFormError&) {
    return std::nullopt;
  }
  const std::string key = model::to_text(bf);
  const std::string key_assoc = model::to_text(model::associate(bf));
  for (bool assoc : {false, true}) {
    const SolutionSet oriented = assoc ? model::associate(bf) : bf;
    for (const auto& p : guesses(oriented)) {
      try {
        const SolutionSet g = model::to_basic_form(generate(p));
        const std::string gk = model::to_text(g);
        if (gk == key) return FamilyMatch{p, false};
        if (gk == key_assoc) return FamilyMatch{p, true};
      } catch (const std::invalid_argument&) {
      }
    }
  }
  return std::nullopt;
}

}  // namespace pillai::families

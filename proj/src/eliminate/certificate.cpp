#include <algorithm>
#include <set>
#include <stdexcept>

#include "json_util.hpp"
#include "pillai/eliminate.hpp"

namespace pillai::eliminate {

using arith::pow;
using model::Exponent;

std::string to_string(Method m) {
  switch (m) {
    case Method::bootstrap: return "bootstrap";
    case Method::lattice: return "lattice";
    case Method::logtest: return "logtest";
    case Method::exhaust: return "exhaust";
  }
  return "?";
}

Method parse_method(const std::string& s) {
  if (s == "bootstrap") return Method::bootstrap;
  if (s == "lattice") return Method::lattice;
  if (s == "logtest") return Method::logtest;
  if (s == "exhaust") return Method::exhaust;
  throw std::invalid_argument("unknown method: " + s);
}

std::vector<Solution> solutions_up_to_y(const Instance& in, Exponent y_max) {
  std::vector<Solution> out;
  Natural sby = in.s;
  for (Exponent y = 0; y <= y_max; ++y, sby *= in.b) {
    // r a^x = c - s b^y (u=0,v=0), s b^y - c (u=1,v=0), c + s b^y (u=0,v=1).
    const Integer targets[3] = {in.c - sby, sby - in.c, in.c + sby};
    const int us[3] = {0, 1, 0}, vs[3] = {0, 0, 1};
    for (int i = 0; i < 3; ++i) {
      const Integer& t = targets[i];
      if (t <= 0 || t % in.r != 0) continue;
      Natural q = t / in.r;
      Natural rest;
      const Exponent x = mpz_remove(rest.get_mpz_t(), q.get_mpz_t(), in.a.get_mpz_t());
      if (rest == 1) out.push_back({x, y, us[i], vs[i]});
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

namespace {

bool known_pair(const SolutionSet& known, Exponent x, Exponent y) {
  return std::any_of(known.solutions.begin(), known.solutions.end(),
                     [&](const Solution& s) { return s.x == x && s.y == y; });
}

nlohmann::json lattice_constants(const LatticeBoundInput& in) {
  return {{"C", int_json(in.C)},
          {"S", rat_json(in.S)},
          {"T", rat_json(in.T)},
          {"hypothesis", rat_json(in.hypothesis)},
          {"digits", in.digits}};
}

// Largest y with s b^y <= 2c: beyond it c/(s b^y) < 1/2.
Exponent small_y_limit(const Instance& in) {
  Exponent y = 0;
  Natural v = in.s * in.b;
  while (v <= 2 * in.c) v *= in.b, ++y;
  return y;
}

}  // namespace

Outcome lattice_certificate(const SolutionSet& known, const LatticeBoundInput& input) {
  const auto res = lattice_bound_auto(input);
  if (!res.gate) return CannotEliminate{"lattice gate c4^2 > S + T^2 fails", to_json(res)};
  const Exponent scan = std::max<Exponent>(*res.y4_bound, res.hypothesis_floor);
  if (scan > 5000) return CannotEliminate{"lattice leaves too many y values to scan", to_json(res)};
  for (const auto& s : solutions_up_to_y(input.instance, scan))
    if (!known_pair(known, s.x, s.y) && Natural(s.x) <= res.x_max_valid)
      return CannotEliminate{"further solution (" + std::to_string(s.x) + "," + std::to_string(s.y) + ") exists",
                             to_json(res)};
  Certificate cert;
  cert.method = Method::lattice;
  cert.known = known;
  cert.bound = std::min(res.x_max_valid, res.y_max_valid);
  cert.payload = to_json(res);
  cert.payload["scan_y_max"] = scan;
  cert.constants = lattice_constants(res.input);
  return cert;
}

Outcome logtest_certificate(const SolutionSet& known, char direction, const Natural& given, long digits) {
  const auto& in = known.instance;
  if (direction != 'x' && direction != 'y') throw std::invalid_argument("logtest: direction must be x or y");
  const LogTestResult r = direction == 'y' ? log_test_y(in, given, digits) : log_test_x(in, given, digits);
  nlohmann::json payload = {{"direction", std::string(1, direction)},
                            {"given", int_json(given)},
                            {"verdict", to_string(r.verdict)},
                            {"nearest", int_json(r.nearest)},
                            {"residual", r.residual.to_string(30)},
                            {"hypothesis_holds", r.hypothesis_holds}};
  if (r.verdict != LogVerdict::non_integer) return CannotEliminate{"log test: " + to_string(r.verdict), payload};
  if (direction == 'x' && !r.hypothesis_holds)
    return CannotEliminate{"log test: c/(s b^y4) >= 1/2 for the given y4", payload};
  // Where c/(s b^y) >= 1/2 the estimate says nothing; those y are checked
  // exactly.
  if (direction == 'y') {
    const Exponent ys = small_y_limit(in);
    for (const auto& s : solutions_up_to_y(in, ys))
      if (Natural(s.x) == given && !known_pair(known, s.x, s.y))
        return CannotEliminate{"further solution with small y exists", payload};
    payload["exact_y_max"] = ys;
  }
  Certificate cert;
  cert.method = Method::logtest;
  cert.known = known;
  cert.bound = given;
  cert.payload = payload;
  cert.constants = {{"digits", digits}};
  return cert;
}

Certificate exhaust_certificate(const SolutionSet& known, Exponent x_max, Exponent y_max) {
  Certificate cert;
  cert.method = Method::exhaust;
  cert.known = known;
  cert.bound = std::min(x_max, y_max);
  cert.payload = {{"x_max", x_max}, {"y_max", y_max}};
  cert.constants = nlohmann::json::object();
  return cert;
}

VerifyReport verify_certificate(const Certificate& cert) {
  VerifyReport rep;
  auto fail = [&](const std::string& why) {
    rep.ok = false;
    rep.reasons.push_back(why);
  };
  const auto& in = cert.known.instance;
  try {
    in.validate();
    for (const auto& s : cert.known.solutions)
      if (!model::evaluate(in, s.x, s.y, s.u, s.v)) fail("listed solution does not satisfy the equation");

    switch (cert.method) {
      case Method::exhaust: {
        const Exponent xm = cert.payload.at("x_max").get<Exponent>();
        const Exponent ym = cert.payload.at("y_max").get<Exponent>();
        for (const auto& s : model::enumerate_solutions(in, xm, ym).solutions)
          if (!known_pair(cert.known, s.x, s.y)) fail("box contains an unlisted solution");
        if (cert.bound != std::min(xm, ym)) fail("bound does not match the box");
        break;
      }
      case Method::lattice: {
        LatticeBoundInput li;
        li.instance = in;
        li.C = int_from_json(cert.constants.at("C"));
        li.S = rat_from_json(cert.constants.at("S"));
        li.T = rat_from_json(cert.constants.at("T"));
        li.hypothesis = rat_from_json(cert.constants.at("hypothesis"));
        li.digits = cert.payload.at("digits").get<long>();
        const auto res = lattice_bound(li);
        nlohmann::json again = to_json(res);
        for (const char* key : {"A", "Y", "B", "sigma2", "c1", "c4_squared", "gate", "y4_bound", "hypothesis_floor",
                                "x_max_valid", "y_max_valid"})
          if (again[key] != cert.payload.at(key)) fail(std::string("lattice field mismatch: ") + key);
        // Independent checks of the reduction itself.
        const Vec2& b1 = res.basis.b1;
        const Vec2& b2 = res.basis.b2;
        if (dot(b1, b1) > dot(b2, b2)) fail("b1 longer than b2");
        if (2 * abs(dot(b1, b2)) > dot(b1, b1)) fail("basis not size reduced");
        const Integer detA = res.a1.x * res.a2.y - res.a1.y * res.a2.x;
        const Integer detB = b1.x * b2.y - b1.y * b2.x;
        if (abs(detA) != abs(detB)) fail("reduction changed the determinant");
        if (!res.gate || !res.y4_bound) {
          fail("lattice gate does not hold");
          break;
        }
        const Exponent scan = cert.payload.at("scan_y_max").get<Exponent>();
        if (scan < std::max<Exponent>(*res.y4_bound, res.hypothesis_floor)) fail("residual scan too short");
        for (const auto& s : solutions_up_to_y(in, scan))
          if (!known_pair(cert.known, s.x, s.y) && Natural(s.x) <= res.x_max_valid)
            fail("residual scan finds an unlisted solution");
        if (cert.bound != std::min(res.x_max_valid, res.y_max_valid)) fail("bound does not match validity box");
        break;
      }
      case Method::logtest: {
        const char dir = cert.payload.at("direction").get<std::string>().at(0);
        const Natural given = int_from_json(cert.payload.at("given"));
        const long digits = cert.constants.at("digits").get<long>();
        const auto r = dir == 'y' ? log_test_y(in, given, digits) : log_test_x(in, given, digits);
        if (r.verdict != LogVerdict::non_integer) fail("log test does not give non_integer");
        if (dir == 'x' && !r.hypothesis_holds) fail("hypothesis fails for the given y4");
        if (dir == 'y') {
          const Exponent ys = cert.payload.at("exact_y_max").get<Exponent>();
          if (ys < small_y_limit(in)) fail("exact small-y range too short");
          for (const auto& s : solutions_up_to_y(in, ys))
            if (Natural(s.x) == given && !known_pair(cert.known, s.x, s.y)) fail("unlisted solution with small y");
        }
        if (cert.bound != given) fail("bound does not match the tested value");
        break;
      }
      case Method::bootstrap: {
        if (arith::gcd(in.r * in.a, in.s * in.b) != 1) fail("gcd(ra, sb) != 1");
        const auto& anc = cert.payload.at("anchor");
        const Exponent ax = anc.at("x").get<Exponent>(), ay = anc.at("y").get<Exponent>();
        if (!known_pair(cert.known, ax, ay) || !model::signs_for(in, ax, ay)) fail("anchor is not a listed solution");
        const auto signs = model::signs_for(in, ax, ay);
        Solution anchor{ax, ay, signs ? signs->first : 0, signs ? signs->second : 0};
        std::set<std::pair<int, int>> seen;
        for (const auto& c : cert.payload.at("cases")) {
          GapSigns g{c.at("gamma").get<int>(), c.at("delta").get<int>()};
          if (!seen.insert({g.gamma, g.delta}).second) fail("sign case listed twice");
          std::vector<BootstrapStep> hist;
          for (const auto& h : c.at("history"))
            hist.push_back({h.at("side").get<std::string>().at(0), h.at("seed").get<bool>(), int_from_json(h.at("d")),
                            int_from_json(h.at("p")), h.at("k").get<unsigned long>(), int_from_json(h.at("order"))});
          BootstrapState st;
          std::string why;
          if (!replay_bootstrap(in, anchor, g, hist, st, why)) {
            fail("bootstrap replay: " + why);
            continue;
          }
          if (st.contradiction) {
            if (!c.at("contradiction").get<bool>()) fail("replay reaches an unrecorded contradiction");
            continue;
          }
          if (int_json(st.x0) != c.at("x0") || int_json(st.y0) != c.at("y0")) fail("replayed x0/y0 differ");
          if (!(st.x0 > cert.bound || st.y0 > cert.bound)) fail("neither gap divisor exceeds the bound");
        }
        break;
      }
    }
  } catch (const std::exception& e) {
    fail(std::string("malformed certificate: ") + e.what());
  }
  return rep;
}

nlohmann::json to_json(const Certificate& cert) {
  return {{"schema", 1},
          {"method", to_string(cert.method)},
          {"known", model::to_json(cert.known)},
          {"bound", int_json(cert.bound)},
          {"payload", cert.payload},
          {"constants", cert.constants}};
}

Certificate certificate_from_json(const nlohmann::json& j) {
  if (j.value("schema", 0) != 1) throw std::invalid_argument("certificate: unsupported schema");
  Certificate c;
  c.method = parse_method(j.at("method").get<std::string>());
  c.known = model::set_from_json(j.at("known"));
  c.bound = int_from_json(j.at("bound"));
  c.payload = j.at("payload");
  c.constants = j.at("constants");
  return c;
}

Natural default_C(const Natural& bound) {
  const unsigned long d = mpz_sizeinbase(bound.get_mpz_t(), 10);
  return pow(Natural(10), 2 * d + 8);
}

Outcome eliminate_fourth(const SolutionSet& triple, const EliminateConfig& cfg) {
  if (triple.solutions.empty()) throw std::invalid_argument("eliminate_fourth: no known solutions");
  const auto& in = triple.instance;
  LatticeBoundInput li;
  li.instance = in;
  li.C = cfg.C == 0 ? default_C(cfg.bound) : cfg.C;
  li.S = mpq_class(cfg.bound * cfg.bound);
  li.T = mpq_class(cfg.bound) + mpq_class(1, 2);
  li.hypothesis = cfg.hypothesis;
  li.digits = std::max<long>(cfg.digits, static_cast<long>(mpz_sizeinbase(li.C.get_mpz_t(), 10)) + 30);

  std::string reasons;
  Outcome lat = lattice_certificate(triple, li);
  if (std::holds_alternative<Certificate>(lat)) return lat;
  reasons = std::get<CannotEliminate>(lat).reason;

  if (arith::gcd(in.r * in.a, in.s * in.b) == 1) {
    const Solution anchor = *std::max_element(
        triple.solutions.begin(), triple.solutions.end(),
        [](const Solution& p, const Solution& q) { return std::pair(p.x, p.y) < std::pair(q.x, q.y); });
    Outcome boot = bootstrap_all(in, anchor, cfg.bound, cfg.effort);
    if (std::holds_alternative<Certificate>(boot)) {
      auto& cert = std::get<Certificate>(boot);
      cert.known = triple;
      return cert;
    }
    reasons += "; " + std::get<CannotEliminate>(boot).reason;
  } else {
    reasons += "; bootstrap needs gcd(ra, sb) = 1";
  }
  return CannotEliminate{reasons, nullptr};
}

}  // namespace pillai::eliminate

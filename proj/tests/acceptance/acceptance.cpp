// Acceptance checks 1-9. Prints one PASS/FAIL line each; exit status is
// the number of failures.

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>

#include "../oracle/search_oracle.hpp"
#include "pillai/bounds.hpp"
#include "pillai/eliminate.hpp"
#include "pillai/families.hpp"
#include "pillai/model.hpp"
#include "pillai/search.hpp"

using namespace pillai;
using arith::Natural;
using arith::pow;
using model::Exponent;
using model::Instance;
using model::Solution;
using model::SolutionSet;

namespace {

struct Verdict {
  bool ok = true;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

int failures = 0;

void report(int n, const std::string& name, double limit_s, const std::function<Verdict()>& check) {
  const auto t0 = Clock::now();
  Verdict v;
  try {
    v = check();
  } catch (const std::exception& e) {
    v = {false, std::string("exception: ") + e.what()};
  }
  const double s = std::chrono::duration<double>(Clock::now() - t0).count();
  if (s > limit_s) {
    v.ok = false;
    v.detail += "; over the " + std::to_string(static_cast<int>(limit_s)) + " s budget";
  }
  failures += !v.ok;
  std::ostringstream line;
  line.precision(3);
  line << (v.ok ? "PASS" : "FAIL") << " " << n << " " << name << ": " << v.detail << " (" << s << " s)";
  std::cout << line.str() << std::endl;
}

std::optional<eliminate::GapSigns> gap_signs(const Instance& in, const Solution& lo, const Solution& hi) {
  const Natural lhs = in.r * pow(in.a, lo.x), rhs = in.s * pow(in.b, lo.y);
  const Natural A = pow(in.a, hi.x - lo.x), B = pow(in.b, hi.y - lo.y);
  for (int g : {0, 1})
    for (int d : {0, 1})
      if (lhs * (A + (g ? -1 : 1)) == rhs * (B + (d ? -1 : 1))) return eliminate::GapSigns{g, d};
  return std::nullopt;
}

Solution solution_at(const Instance& in, Exponent x, Exponent y) {
  const auto sg = model::signs_for(in, x, y);
  if (!sg) throw std::logic_error("not a solution");
  return {x, y, sg->first, sg->second};
}

// ---- 1 -----------------------------------------------------------------------

Verdict rows() {
  const auto& rows = model::theorem1_rows();
  std::size_t pairs = 0;
  for (const auto& row : rows)
    for (auto [x, y] : row.pairs()) {
      ++pairs;
      if (!model::signs_for(row.instance, x, y))
        return {false, "(" + std::to_string(x) + "," + std::to_string(y) + ") fails in " + model::to_text(row)};
    }
  return {rows.size() == 9 && pairs == 38, std::to_string(rows.size()) + " rows, " + std::to_string(pairs) + " pairs"};
}

// ---- 2 -----------------------------------------------------------------------

// Every (a, b, c, r, s) in the box with at least four (x, y) solutions, found
// by bucketing the values +-r a^x +- s b^y that land in [1, c_max].
Verdict brute_force() {
  constexpr int kAB = 12, kRS = 30, kC = 60, kXY = 12;
  std::size_t found = 0, exceptions = 0;
  std::string first_bad;
  std::int64_t pa[kAB + 1][kXY + 1];
  for (int a = 2; a <= kAB; ++a) {
    pa[a][0] = 1;
    for (int e = 1; e <= kXY; ++e) pa[a][e] = pa[a][e - 1] * a;
  }
  std::vector<std::uint16_t> seen[kC + 1];
  for (int a = 2; a <= kAB; ++a)
    for (int b = 2; b <= kAB; ++b)
      for (int r = 1; r <= kRS; ++r)
        for (int s = 1; s <= kRS; ++s) {
          for (auto& v : seen) v.clear();
          for (int x = 0; x <= kXY; ++x)
            for (int y = 0; y <= kXY; ++y) {
              const std::int64_t A = r * pa[a][x], B = s * pa[b][y];
              for (std::int64_t c : {A + B, A - B, B - A})
                if (c >= 1 && c <= kC) seen[c].push_back(static_cast<std::uint16_t>(x * 32 + y));
            }
          for (int c = 1; c <= kC; ++c) {
            auto& v = seen[c];
            std::sort(v.begin(), v.end());
            v.erase(std::unique(v.begin(), v.end()), v.end());
            if (v.size() < 4) continue;
            ++found;
            std::vector<model::Pair> pairs;
            for (auto k : v) pairs.push_back({k / 32u, k % 32u});
            const auto set = model::make_set(Instance{a, b, c, r, s}, pairs);
            if (!model::matches_theorem1(set)) {
              if (!exceptions++) first_bad = model::to_text(set);
            }
          }
        }
  Verdict v{exceptions == 0 && found > 0,
            std::to_string(found) + " instances with >= 4 solutions, " + std::to_string(exceptions) + " off the rows"};
  if (exceptions) v.detail += ", first " + first_bad;
  return v;
}

// ---- 3 -----------------------------------------------------------------------

Verdict family_sweep() {
  families::ParamBox box;
  box.a_max = 300;
  box.exp_max = 14;
  box.value_cap = 10000;
  std::size_t total = 0, bad = 0;
  for (auto id : families::all_families())
    for (const auto& item : families::sweep(id, box).items) {
      ++total;
      if (item.set.pair_count() < 3) ++bad;
      for (const auto& s : item.set.solutions)
        if (!model::evaluate(item.set.instance, s.x, s.y, s.u, s.v)) ++bad;
    }
  return {bad == 0 && total >= 200, std::to_string(total) + " sets, " + std::to_string(bad) + " failures"};
}

// ---- 4 -----------------------------------------------------------------------

Verdict sigma_property() {
  std::size_t cases = 0, exceptions = 0;
  for (unsigned long a = 2; a <= 30; ++a)
    for (unsigned long b = 2; b <= 30; ++b) {
      if (std::gcd(a, b) != 1) continue;
      const auto cert = bounds::sigma(a, b);
      if (!bounds::check_sigma(cert)) ++exceptions;
      for (unsigned long y = 0; y <= 12; ++y)
        for (int d : {1, -1}) {
          const Natural v = pow(Natural(b), y) + d;
          for (unsigned long x = 1; x <= 12; ++x) {
            const Natural ax = pow(Natural(a), x);
            if (v % ax != 0) continue;
            ++cases;
            if ((cert.A_sigma * y) % ax != 0) ++exceptions;
          }
        }
    }
  return {exceptions == 0, std::to_string(cases) + " divisibilities, " + std::to_string(exceptions) + " exceptions"};
}

// ---- 5 -----------------------------------------------------------------------

Verdict bootstrap_checks() {
  const Instance row2{3, 2, 5, 1, 2};
  const auto lo = solution_at(row2, 1, 2), hi = solution_at(row2, 3, 4);
  const auto g = gap_signs(row2, lo, hi);
  if (!g) return {false, "no gap signs for (1,2) -> (3,4)"};
  const auto res = eliminate::bootstrap(row2, lo, *g, 1000000);
  if (!std::holds_alternative<eliminate::CannotEliminate>(res)) return {false, "row 2 was eliminated"};
  std::vector<eliminate::BootstrapStep> hist;
  std::size_t steps = 0;
  for (const auto& h : std::get<eliminate::CannotEliminate>(res).partial.at("history")) {
    hist.push_back({h.at("side").get<std::string>()[0], h.at("seed").get<bool>(),
                    Natural(h.at("d").get<std::string>()), Natural(h.at("p").get<std::string>()),
                    h.at("k").get<unsigned long>(), Natural(h.at("order").get<std::string>())});
    eliminate::BootstrapState st;
    std::string why;
    if (!eliminate::replay_bootstrap(row2, lo, *g, hist, st, why)) return {false, "replay failed: " + why};
    if (2 % st.x0 != 0 || 2 % st.y0 != 0)
      return {false, "step " + std::to_string(hist.size()) + ": x0 = " + arith::to_string(st.x0) +
                         ", y0 = " + arith::to_string(st.y0)};
    ++steps;
  }
  if (steps == 0) return {false, "no bootstrap steps on row 2"};

  const Instance big{56744, 1477, 83810889, 1478, 56743};
  const Natural bound("800000000000000");
  const auto out = eliminate::bootstrap_all(big, solution_at(big, 3, 4), bound);
  if (!std::holds_alternative<eliminate::Certificate>(out))
    return {false, "no certificate: " + std::get<eliminate::CannotEliminate>(out).reason};
  auto cert = std::get<eliminate::Certificate>(out);
  cert.known = model::make_set(big, {{0, 1}, {1, 0}, {3, 4}});
  const auto rep = eliminate::verify_certificate(cert);
  return {rep.ok && cert.bound == bound,
          "row 2: x0 | 2 and y0 | 2 over " + std::to_string(steps) + " steps; 56744: certificate to " +
              arith::to_string(cert.bound) + (rep.ok ? ", verified" : ", REJECTED")};
}

// ---- 6 -----------------------------------------------------------------------

Verdict log_calibration() {
  constexpr long kDigits = 120;
  const auto margin = arith::BigDecimal::parse("0.0000000000000000000000001");  // 1e-25
  std::size_t hits = 0, misses = 0;
  std::vector<std::pair<Instance, Exponent>> grid_rows;
  for (const auto& row : model::theorem1_rows()) {
    const auto& in = row.instance;
    Exponent x_top = 0;
    for (const auto& s : row.solutions) {
      x_top = std::max(x_top, s.x);
      if (2 * in.c >= in.s * pow(in.b, s.y)) continue;  // c/(s b^y) >= 1/2
      const auto r = eliminate::log_test_y(in, s.x, kDigits);
      if (r.verdict == eliminate::LogVerdict::integer_candidate && r.nearest == s.y) ++hits;
      else ++misses;
    }
    // With a = b the value is x + log(r/s)/log b, never a fair test.
    if (in.a != in.b) grid_rows.push_back({in, x_top});
  }
  std::size_t grid = 0, grid_bad = 0;
  for (std::size_t k = 0; grid < 100; ++k) {
    const auto& [in, x_top] = grid_rows[k % grid_rows.size()];
    const Exponent x = x_top + 5 + k / grid_rows.size();
    ++grid;
    const auto r = eliminate::log_test_y(in, x, kDigits);
    if (r.verdict != eliminate::LogVerdict::non_integer || r.residual < margin) ++grid_bad;
  }
  return {misses == 0 && hits > 0 && grid_bad == 0,
          std::to_string(hits) + " solutions recovered, " + std::to_string(misses) + " missed; " +
              std::to_string(grid) + " grid points, " + std::to_string(grid_bad) + " within 1e-25 of an integer"};
}

// ---- 7 -----------------------------------------------------------------------

Verdict lattice_consistency() {
  std::size_t fired = 0, tried = 0, exceptions = 0;
  std::string first_bad;
  for (unsigned long a = 2; a <= 12 && fired < 50; ++a)
    for (unsigned long b = 2; b <= 12 && fired < 50; ++b) {
      if (a == b || std::gcd(a, b) != 1 || oracle::perfect_power(a) || oracle::perfect_power(b)) continue;
      for (unsigned long r = 1; r <= 5 && fired < 50; ++r)
        for (unsigned long s = 1; s <= 5 && fired < 50; ++s) {
          if (std::gcd(r, s * b) != 1 || std::gcd(s, r * a) != 1 || r * a == s * b) continue;
          const Instance in{a, b, r * a > s * b ? r * a - s * b : s * b - r * a, r, s};
          eliminate::LatticeBoundInput li;
          li.instance = in;
          li.C = pow(Natural(10), 20);
          li.S = 100000000;
          li.T = mpq_class(20001, 2);
          li.digits = 80;
          ++tried;
          const auto res = eliminate::lattice_bound_auto(li);
          if (!res.y4_bound) continue;
          ++fired;
          for (const auto& sol : eliminate::solutions_up_to_y(in, 10000))
            if (sol.y > *res.y4_bound && sol.y >= res.hypothesis_floor && sol.x <= res.x_max_valid &&
                sol.y <= res.y_max_valid) {
              if (!exceptions++) first_bad = model::to_text(in) + " at y = " + std::to_string(sol.y);
            }
        }
    }
  Verdict v{fired >= 50 && exceptions == 0, std::to_string(fired) + " of " + std::to_string(tried) +
                                                " instances fired, " + std::to_string(exceptions) + " exceptions"};
  if (exceptions) v.detail += ", first " + first_bad;
  return v;
}

// ---- 8 and 9 -------------------------------------------------------------------

constexpr unsigned long kBox = 60;

search::SearchConfig desk(search::Case kind) {
  search::SearchConfig cfg;
  cfg.kind = kind;
  cfg.outer_max = kBox;
  cfg.a_max = kBox;
  return cfg;
}

Verdict completeness() {
  std::ostringstream detail;
  bool ok = true;
  for (auto kind : {search::Case::c19b, search::Case::c21b, search::Case::c20b}) {
    const auto out = search::run(desk(kind));
    std::set<std::string> want;
    switch (kind) {
      case search::Case::c19b: want = oracle::configs_19b(kBox, 1000000); break;
      case search::Case::c21b: want = oracle::configs_21b(kBox, kBox, 1000000); break;
      case search::Case::c20b: want = oracle::configs_20b(kBox, 1000000); break;
    }
    std::set<std::string> have;
    std::size_t bad = 0;
    for (const auto& r : out.records) {
      if (r.set) have.insert(oracle::key_of(*r.set));
      if (r.disposition != search::Disposition::unresolved && !search::check_record(r).empty()) ++bad;
    }
    std::size_t missing = 0;
    for (const auto& k : want) missing += !have.count(k);
    ok = ok && missing == 0 && out.unresolved() == 0 && bad == 0;
    detail << (detail.tellp() > 0 ? "; " : "") << search::to_string(kind) << ": " << want.size() << " oracle, " << missing << " missing, "
           << out.records.size() << " records, " << out.unresolved() << " unresolved, " << bad << " failing checks";
  }
  return {ok, detail.str()};
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream is(p, std::ios::binary);
  std::stringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

Verdict determinism() {
  const auto dir = std::filesystem::temp_directory_path() / "pillai_acceptance";
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  std::ostringstream detail;
  bool ok = true;
  for (auto kind : {search::Case::c19b, search::Case::c21b, search::Case::c20b}) {
    const auto cfg = desk(kind);
    const std::string name = search::to_string(kind);
    std::ofstream(dir / (name + ".one.jsonl"), std::ios::binary) << search::serialize(search::run(cfg), cfg);

    // Four shards; each is killed part-way and resumed from its checkpoint.
    std::vector<search::SearchOutcome> parts;
    bool killed = true;
    for (unsigned long i = 0; i < 4; ++i) {
      auto c = cfg;
      c.shard = {4, i};
      c.checkpoint = (dir / (name + ".shard" + std::to_string(i) + ".ckpt")).string();
      c.resume = true;
      c.stop_after = 3;
      killed = killed && search::run(c).interrupted;
      c.stop_after = 0;
      parts.push_back(search::run(c));
    }
    std::ofstream(dir / (name + ".four.jsonl"), std::ios::binary) << search::serialize(search::merge(parts), cfg);
    const bool same = slurp(dir / (name + ".one.jsonl")) == slurp(dir / (name + ".four.jsonl"));
    ok = ok && same && killed;
    detail << (detail.tellp() > 0 ? "; " : "") << name << (same ? " identical" : " DIFFERS") << (killed ? "" : " (a shard was not interrupted)");
  }
  std::filesystem::remove_all(dir);
  return {ok, detail.str()};
}

}  // namespace

int main() {
  report(1, "classification rows", 1, rows);
  report(2, "brute-force box normalizes onto the rows", 600, brute_force);
  report(3, "family sweep", 60, family_sweep);
  report(4, "sigma divisibility", 60, sigma_property);
  report(5, "bootstrap soundness", 600, bootstrap_checks);
  report(6, "log-test calibration", 60, log_calibration);
  report(7, "lattice bound consistency", 600, lattice_consistency);
  report(8, "search completeness", 1800, completeness);
  report(9, "determinism across shards and resume", 1800, determinism);
  return failures;
}

// Command-line front end. Exit status: 0 when everything resolved or
// verified, 2 when unresolved candidates remain, 1 on any error.

#include <chrono>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iostream>
#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "pillai/digest.hpp"
#include "pillai/eliminate.hpp"
#include "pillai/families.hpp"
#include "pillai/model.hpp"
#include "pillai/search.hpp"

#ifndef PILLAI_VERSION
#define PILLAI_VERSION "0"
#endif

using nlohmann::json;
namespace el = pillai::eliminate;
namespace md = pillai::model;
namespace sr = pillai::search;
using pillai::arith::Natural;
static std::string arith_text(const Natural& n) { return pillai::arith::to_string(n); }

namespace {

constexpr int kOk = 0, kError = 1, kUnresolved = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw UsageError("cannot open " + path);
  std::stringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

// Single appender for every output file.
void write_file(const std::string& path, const std::string& text, bool append = false) {
  std::ofstream os(path, append ? std::ios::app : std::ios::trunc);
  if (!os) throw UsageError("cannot write " + path);
  os << text;
  if (!os) throw UsageError("write failed for " + path);
}

std::string utc_now() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

// PILLAI_LOG_DIGITS overrides the working precision; a bad value is an
// error rather than silently ignored.
long default_digits(long fallback = pillai::arith::kDefaultDigits) {
  if (const char* env = std::getenv("PILLAI_LOG_DIGITS")) {
    char* end = nullptr;
    const long d = std::strtol(env, &end, 10);
    if (end == env || *end != '\0' || d < 50)
      throw UsageError(std::string("PILLAI_LOG_DIGITS must be an integer >= 50, got '") + env + "'");
    return d;
  }
  return fallback;
}

Natural parse_natural(const std::string& key, const std::string& text) {
  try {
    const Natural n = pillai::arith::parse_integer(text);
    if (n < 0) throw std::invalid_argument("negative");
    return n;
  } catch (const std::exception&) {
    throw UsageError(key + ": expected a nonnegative integer, got '" + text + "'");
  }
}

unsigned long parse_ulong(const std::string& key, const std::string& text) {
  const Natural n = parse_natural(key, text);
  if (!n.fits_ulong_p()) throw UsageError(key + ": value too large");
  return n.get_ui();
}

// Flat key=value lines; '#' starts a comment.
std::map<std::string, std::string> read_config(const std::string& path) {
  std::map<std::string, std::string> kv;
  std::istringstream is(read_file(path));
  std::string line;
  for (int n = 1; std::getline(is, line); ++n) {
    if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw UsageError(path + ":" + std::to_string(n) + ": malformed line, expected key=value");
    auto trim = [](std::string s) {
      s.erase(0, s.find_first_not_of(" \t\r"));
      s.erase(s.find_last_not_of(" \t\r") + 1);
      return s;
    };
    const std::string key = trim(line.substr(0, eq)), value = trim(line.substr(eq + 1));
    if (key.empty()) throw UsageError(path + ":" + std::to_string(n) + ": empty key");
    kv[key] = value;
  }
  return kv;
}

sr::SearchConfig build_search_config(const std::map<std::string, std::string>& kv) {
  sr::SearchConfig cfg;
  cfg.digits = default_digits();
  auto it = kv.find("case");
  if (it == kv.end()) throw UsageError("search: no case given (--case or case= in the config)");
  try {
    cfg.kind = sr::parse_case(it->second);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  for (const auto& [key, value] : kv) {
    if (key == "case") continue;
    else if (key == "b_max" || key == "outer_max") cfg.outer_max = parse_natural(key, value);
    else if (key == "outer_min") cfg.outer_min = parse_natural(key, value);
    else if (key == "a_max") {
      cfg.a_max = parse_natural(key, value);
      if (cfg.kind == sr::Case::c20b) cfg.outer_max = cfg.a_max;
    } else if (key == "bound") cfg.bound = parse_natural(key, value);
    else if (key == "digits") cfg.digits = static_cast<long>(parse_ulong(key, value));
    else if (key == "signs") {
      cfg.signs.clear();
      std::stringstream ss(value);
      for (std::string t; std::getline(ss, t, ',');) cfg.signs.push_back(static_cast<int>(parse_ulong(key, t)));
    } else if (key == "shard") {
      try {
        cfg.shard = sr::parse_shard(value);
      } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
      }
    } else if (key == "checkpoint") cfg.checkpoint = value;
    else if (key == "factor.trial_bound") cfg.factor.trial_bound = parse_ulong(key, value);
    else if (key == "factor.rho_iterations") cfg.factor.rho_iterations = parse_ulong(key, value);
    else if (key == "effort.rounds") cfg.effort.rounds = parse_ulong(key, value);
    else if (key == "effort.factor_digits") cfg.effort.factor_digits = parse_ulong(key, value);
    else if (key == "effort.sieve_k") cfg.effort.sieve_k = parse_ulong(key, value);
    else if (key == "effort.divisors_per_round") cfg.effort.divisors_per_round = parse_ulong(key, value);
    else throw UsageError("unknown configuration key '" + key + "'");
  }
  try {
    cfg.validate();
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  return cfg;
}

void append_manifest(const std::string& path, const std::string& command, const std::vector<std::string>& args,
                     const json& config, const std::string& started, const std::vector<std::string>& inputs,
                     const std::vector<std::string>& outputs, const std::string& outcome) {
  if (path.empty()) return;
  json m = {{"schema", 1},
            {"kind", "run_manifest"},
            {"command", command},
            {"argv", args},
            {"config", config},
            {"started", started},
            {"finished", utc_now()},
            {"version", PILLAI_VERSION},
            {"inputs", inputs},
            {"outputs", outputs},
            {"outcome_sha256", sr::sha256_hex(outcome)}};
  write_file(path, m.dump() + '\n', true);
}

// ---- verify-theorem1 --------------------------------------------------------

int cmd_verify_theorem1(const std::string& fixtures, bool as_json) {
  std::vector<std::string> rows;
  if (fixtures.empty()) {
    for (const auto& r : md::theorem1_rows()) rows.push_back(md::to_text(r));
  } else {
    std::istringstream is(read_file(fixtures));
    for (std::string line; std::getline(is, line);)
      if (line.find_first_not_of(" \t\r") != std::string::npos && line[line.find_first_not_of(" \t")] != '#')
        rows.push_back(line);
  }
  int failures = 0;
  json report = json::array();
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const int row = static_cast<int>(i) + 1;
    json entry = {{"row", row}, {"set", rows[i]}};
    try {
      const auto set = md::parse_set(rows[i]);
      json sols = json::array();
      for (const auto& s : set.solutions) {
        if (!md::evaluate(set.instance, s.x, s.y, s.u, s.v)) throw std::invalid_argument("sign check failed");
        sols.push_back({{"x", s.x}, {"y", s.y}, {"u", s.u}, {"v", s.v}});
      }
      entry["solutions"] = sols;
      entry["ok"] = true;
      if (!as_json) {
        std::cout << "row " << row << ": " << rows[i] << " ok\n";
        for (const auto& s : set.solutions)
          std::cout << "    (" << s.x << "," << s.y << ")  u=" << s.u << " v=" << s.v << "\n";
      }
    } catch (const std::exception& e) {
      ++failures;
      entry["ok"] = false;
      entry["error"] = e.what();
      std::cerr << "row " << row << " FAILED: " << e.what() << "\n";
    }
    report.push_back(entry);
  }
  if (as_json) std::cout << report.dump() << "\n";
  else std::cout << rows.size() - failures << "/" << rows.size() << " rows verified\n";
  return failures ? kError : kOk;
}

// ---- families ---------------------------------------------------------------

int cmd_families(const std::string& which, unsigned long a_max, unsigned long exp_max, const std::string& cap,
                 const std::string& out) {
  std::vector<pillai::families::FamilyId> ids;
  if (which == "all") ids = pillai::families::all_families();
  else {
    try {
      ids.push_back(pillai::families::parse_family_id(which));
    } catch (const std::exception& e) {
      throw UsageError(e.what());
    }
  }
  pillai::families::ParamBox box;
  box.a_max = a_max;
  box.exp_max = exp_max;
  if (!cap.empty()) box.value_cap = parse_natural("--value-cap", cap);
  std::string lines;
  std::size_t total = 0;
  for (auto id : ids) {
    const auto res = pillai::families::sweep(id, box);
    for (const auto& item : res.items) {
      for (const auto& s : item.set.solutions)
        if (!md::evaluate(item.set.instance, s.x, s.y, s.u, s.v))
          throw std::runtime_error("generated set fails: " + md::to_text(item.set));
      lines += json{{"schema", 1},
                    {"kind", "family_member"},
                    {"family", pillai::families::to_string(id)},
                    {"params", pillai::families::describe(item.params)},
                    {"set", md::to_text(item.set)}}
                   .dump() +
               '\n';
    }
    std::cout << "family " << pillai::families::to_string(id) << ": " << res.items.size() << " sets\n";
    total += res.items.size();
  }
  std::cout << total << " sets, all verified\n";
  if (!out.empty()) write_file(out, lines);
  return kOk;
}

// ---- search and merge ---------------------------------------------------------

int cmd_search(std::map<std::string, std::string> kv, const std::string& config_path, unsigned shards, unsigned jobs,
               bool resume, bool restart, unsigned long stop_after, const std::string& out,
               const std::string& manifest, const std::vector<std::string>& args) {
  const std::string started = utc_now();
  if (!config_path.empty()) {
    auto file = read_config(config_path);
    for (auto& [k, v] : kv) file[k] = v;  // flags win
    kv = std::move(file);
  }
  auto cfg = build_search_config(kv);
  cfg.resume = resume;
  cfg.restart = restart;
  cfg.stop_after = stop_after;
  if (resume && cfg.checkpoint.empty()) throw UsageError("--resume needs a checkpoint path");

  sr::SearchOutcome result;
  std::string text;
  if (shards > 1) {
    if (cfg.shard.modulus != 1) throw UsageError("--shards and --shard are exclusive");
    std::vector<sr::Shard> list;
    for (unsigned i = 0; i < shards; ++i) list.push_back({shards, i});
    result = sr::run_sharded(cfg, list, jobs);
  } else {
    result = sr::run(cfg);
  }
  text = sr::serialize(result, cfg);
  if (!out.empty()) write_file(out, text);
  const std::string mpath = !manifest.empty() ? manifest : (out.empty() ? "" : out + ".manifest.jsonl");
  append_manifest(mpath, "search", args, cfg.fingerprint(), started, config_path.empty() ? std::vector<std::string>{} : std::vector<std::string>{config_path},
                  out.empty() ? std::vector<std::string>{} : std::vector<std::string>{out}, text);

  std::cout << "case " << sr::to_string(result.kind) << ": " << result.records.size() << " candidates";
  for (const auto& [k, v] : result.counters)
    if (k.rfind("disposition.", 0) == 0) std::cout << ", " << k.substr(12) << " " << v;
  std::cout << " (" << result.seconds << " s)\n";
  for (const auto& r : result.records)
    if (r.disposition == sr::Disposition::unresolved)
      std::cout << "unresolved: " << r.key() << "  " << r.detail.value("reason", std::string()) << "\n";
  if (result.interrupted) {
    std::cout << "stopped early; rerun with --resume to continue\n";
    return kUnresolved;
  }
  return result.unresolved() ? kUnresolved : kOk;
}

int cmd_merge(const std::vector<std::string>& inputs, const std::string& out) {
  std::vector<sr::SearchOutcome> parts;
  json fingerprint;
  std::set<std::string> shards;
  for (const auto& path : inputs) {
    const auto parsed = sr::parse_outcome(read_file(path));
    if (parsed.header.is_null()) throw UsageError(path + ": no outcome header");
    if (fingerprint.is_null()) fingerprint = parsed.header.at("config");
    else if (fingerprint != parsed.header.at("config")) throw UsageError(path + ": configuration differs");
    const std::string shard = parsed.header.value("shard", std::string("0/1"));
    if (!shards.insert(shard).second) throw UsageError(path + ": shard " + shard + " given twice");
    parts.push_back(sr::to_outcome(parsed));
  }
  std::vector<sr::Shard> list;
  for (const auto& s : shards) list.push_back(sr::parse_shard(s));
  try {
    sr::validate_shards(list);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  const auto merged = sr::merge(parts);
  const std::string text = sr::serialize(merged, fingerprint);
  if (!out.empty()) write_file(out, text);
  else std::cout << text;
  std::cerr << merged.records.size() << " records, " << merged.unresolved() << " unresolved\n";
  return merged.unresolved() || merged.interrupted ? kUnresolved : kOk;
}

// ---- eliminate ----------------------------------------------------------------

int cmd_eliminate(const std::string& set_text, const std::string& instance, const std::string& anchor_text,
                  std::string method, const std::string& bound_text, long digits, const std::string& given,
                  char direction, unsigned long box, const std::string& out) {
  md::SolutionSet known;
  std::optional<md::Solution> anchor;
  if (!set_text.empty()) {
    known = md::parse_set(set_text);
  } else {
    if (instance.empty()) throw UsageError("eliminate: give --set or --instance");
    const auto inst = md::parse_instance(instance);
    md::Exponent cap = 64;
    if (!anchor_text.empty()) {
      const auto comma = anchor_text.find(',');
      if (comma == std::string::npos) throw UsageError("--anchor must be x,y");
      const auto x = parse_ulong("--anchor", anchor_text.substr(0, comma));
      const auto y = parse_ulong("--anchor", anchor_text.substr(comma + 1));
      const auto sg = md::signs_for(inst, x, y);
      if (!sg) throw UsageError("--anchor (" + anchor_text + ") is not a solution");
      anchor = md::Solution{x, y, sg->first, sg->second};
      cap = std::max({cap, x, y});
    }
    known = md::enumerate_solutions(inst, cap, cap);
  }
  if (known.solutions.empty()) throw UsageError("eliminate: the instance has no known solution");
  if (!anchor)
    anchor = *std::max_element(known.solutions.begin(), known.solutions.end(),
                               [](const md::Solution& p, const md::Solution& q) {
                                 return std::pair(p.x, p.y) < std::pair(q.x, q.y);
                               });
  const Natural bound = parse_natural("--bound", bound_text);
  if (digits == 0)
    digits = default_digits(method == "logtest" ? pillai::arith::default_log_test_digits() : pillai::arith::kDefaultDigits);

  el::Outcome res;
  if (method == "auto") {
    el::EliminateConfig ec;
    ec.bound = bound;
    ec.digits = digits;
    res = el::eliminate_fourth(known, ec);
  } else {
    el::Method m;
    try {
      m = el::parse_method(method);
    } catch (const std::exception& e) {
      throw UsageError(e.what());
    }
    switch (m) {
      case el::Method::lattice: {
        el::LatticeBoundInput li;
        li.instance = known.instance;
        li.C = el::default_C(bound);
        li.S = mpq_class(bound * bound);
        li.T = mpq_class(bound) + mpq_class(1, 2);
        li.digits = std::max<long>(digits, static_cast<long>(mpz_sizeinbase(li.C.get_mpz_t(), 10)) + 30);
        res = el::lattice_certificate(known, li);
        break;
      }
      case el::Method::bootstrap: {
        res = el::bootstrap_all(known.instance, *anchor, bound);
        if (auto* c = std::get_if<el::Certificate>(&res)) c->known = known;
        break;
      }
      case el::Method::logtest:
        if (given.empty()) throw UsageError("logtest needs --given");
        res = el::logtest_certificate(known, direction, parse_natural("--given", given), digits);
        break;
      case el::Method::exhaust: res = el::exhaust_certificate(known, box, box); break;
    }
  }
  if (auto* cert = std::get_if<el::Certificate>(&res)) {
    std::string claim;
    switch (cert->method) {
      case el::Method::logtest:
        claim = std::string("no further solution with ") + (direction == 'y' ? "x = " : "y = ") + given;
        break;
      case el::Method::exhaust: claim = "no further solution with x, y <= " + std::to_string(box); break;
      default: claim = "no further solution with exponents up to " + arith_text(cert->bound);
    }
    std::cout << "eliminated by " << el::to_string(cert->method) << ": " << claim << " for " << md::to_text(known)
              << "\n";
    const std::string line = el::to_json(*cert).dump() + '\n';
    if (!out.empty()) write_file(out, line);
    return kOk;
  }
  const auto& ce = std::get<el::CannotEliminate>(res);
  std::cout << "cannot eliminate: " << ce.reason << "\n";
  if (!out.empty()) write_file(out, json{{"schema", 1}, {"cannot_eliminate", ce.reason}, {"partial", ce.partial}}.dump() + '\n');
  return kUnresolved;
}

// ---- certcheck ------------------------------------------------------------------

int cmd_certcheck(const std::vector<std::string>& inputs) {
  std::size_t checked = 0, failed = 0, unresolved = 0;
  for (const auto& path : inputs) {
    std::istringstream is(read_file(path));
    std::string line;
    for (int n = 1; std::getline(is, line); ++n) {
      if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
      const std::string where = path + ":" + std::to_string(n);
      json j;
      try {
        j = json::parse(line);
      } catch (const std::exception& e) {
        throw UsageError(where + ": not JSON");
      }
      const std::string kind = j.value("kind", std::string());
      if (kind == "search_outcome" || kind == "run_manifest" || kind == "family_member") continue;
      std::string why;
      if (j.contains("disposition")) {
        const auto rec = sr::record_from_json(j);
        if (rec.disposition == sr::Disposition::unresolved) {
          ++unresolved;
          continue;
        }
        why = sr::check_record(rec);
      } else if (j.contains("method")) {
        try {
          const auto rep = el::verify_certificate(el::certificate_from_json(j));
          for (const auto& r : rep.reasons) why += (why.empty() ? "" : "; ") + r;
          if (!rep.ok && why.empty()) why = "rejected";
        } catch (const std::exception& e) {
          why = e.what();
        }
      } else if (j.contains("cannot_eliminate")) {
        ++unresolved;
        continue;
      } else {
        throw UsageError(where + ": neither a record nor a certificate");
      }
      ++checked;
      if (!why.empty()) {
        ++failed;
        std::cout << where << ": FAILED " << why << "\n";
      }
    }
  }
  std::cout << checked << " checked, " << failed << " failed, " << unresolved << " unresolved\n";
  if (failed) return kError;
  return unresolved ? kUnresolved : kOk;
}

// ---- enumerate ------------------------------------------------------------------

int cmd_enumerate(const std::string& instance, unsigned long xmax, unsigned long ymax, bool as_json) {
  const auto set = md::enumerate_solutions(md::parse_instance(instance), xmax, ymax);
  if (as_json) {
    std::cout << md::to_json(set).dump() << "\n";
    return kOk;
  }
  for (const auto& s : set.solutions) std::cout << "(" << s.x << "," << s.y << ")  u=" << s.u << " v=" << s.v << "\n";
  std::cout << set.pair_count() << " pairs: " << md::to_text(set) << "\n";
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Solution sets of (-1)^u r a^x + (-1)^v s b^y = c"};
  app.require_subcommand(1);
  app.set_version_flag("--version", PILLAI_VERSION);
  std::vector<std::string> args(argv, argv + argc);

  auto* vt = app.add_subcommand("verify-theorem1", "check the nine classification rows solution by solution");
  std::string fixtures;
  bool vt_json = false;
  vt->add_option("--fixtures", fixtures, "read rows from this file instead (one set per line)");
  vt->add_flag("--json", vt_json, "print the per-solution sign table as JSON");

  auto* fam = app.add_subcommand("families", "sweep the infinite classes over a parameter box");
  std::string family = "all", value_cap, fam_out;
  unsigned long fam_a = 20, fam_e = 6;
  fam->add_option("--family", family, "62..69, 10a or all");
  fam->add_option("--a-max", fam_a, "bound on base-like parameters");
  fam->add_option("--exp-max", fam_e, "bound on exponent-like parameters");
  fam->add_option("--value-cap", value_cap, "drop sets with a, b, c, r or s above this");
  fam->add_option("--out", fam_out, "JSON lines output");

  auto* se = app.add_subcommand("search", "run a case driver");
  std::map<std::string, std::optional<std::string>> flags{
      {"case", {}}, {"b_max", {}}, {"a_max", {}}, {"outer_min", {}}, {"bound", {}},
      {"signs", {}}, {"shard", {}}, {"checkpoint", {}}, {"digits", {}}};
  std::string config_path, se_out, manifest;
  unsigned shards = 1, jobs = 1;
  unsigned long stop_after = 0;
  bool resume = false, restart = false;
  se->add_option("--case", flags["case"], "19b, 21b or 20b");
  se->add_option("--config", config_path, "key=value configuration file; flags override it");
  se->add_option("--b-max", flags["b_max"], "outer bound on b (19b, 21b)");
  se->add_option("--a-max", flags["a_max"], "bound on a (outer for 20b)");
  se->add_option("--outer-min", flags["outer_min"], "first outer value");
  se->add_option("--bound", flags["bound"], "global exponent and coefficient bound");
  se->add_option("--signs", flags["signs"], "outer sign choices, e.g. 0,1");
  se->add_option("--shard", flags["shard"], "run only shard i/m");
  se->add_option("--checkpoint", flags["checkpoint"], "checkpoint file");
  se->add_option("--digits", flags["digits"], "working decimal digits");
  se->add_option("--shards", shards, "split into this many shards and merge");
  se->add_option("--jobs", jobs, "worker threads for --shards");
  se->add_flag("--resume", resume, "continue from the checkpoint");
  se->add_flag("--restart", restart, "discard an unusable checkpoint");
  se->add_option("--stop-after", stop_after, "stop after this many outer values (testing)");
  se->add_option("--out", se_out, "JSON lines outcome file");
  se->add_option("--manifest", manifest, "run manifest to append to (default: <out>.manifest.jsonl)");

  auto* mg = app.add_subcommand("merge", "merge shard outcome files");
  std::vector<std::string> mg_in;
  std::string mg_out;
  mg->add_option("--in", mg_in, "outcome files")->required();
  mg->add_option("--out", mg_out, "merged outcome file");

  auto* elim = app.add_subcommand("eliminate", "try to rule out a further solution");
  std::string el_set, el_instance, el_anchor, el_method = "auto", el_bound = "1000000", el_given, el_out;
  std::string el_dir = "y";
  unsigned long el_box = 40;
  long el_digits = 0;
  elim->add_option("--set", el_set, "known solutions, e.g. \"(3,2,5,1,2; 0,1,1,0,1,2,2,1,3,4)\"");
  elim->add_option("--instance", el_instance, "a,b,c,r,s (known solutions are enumerated)");
  elim->add_option("--anchor", el_anchor, "x,y of the bootstrap anchor");
  elim->add_option("--method", el_method, "auto, lattice, bootstrap, logtest or exhaust");
  elim->add_option("--bound", el_bound, "bound for the claim");
  elim->add_option("--digits", el_digits, "working decimal digits");
  elim->add_option("--given", el_given, "x4 (direction y) or y4 (direction x) for logtest");
  elim->add_option("--direction", el_dir, "y or x for logtest");
  elim->add_option("--box", el_box, "box for exhaust");
  elim->add_option("--out", el_out, "certificate output");

  auto* cc = app.add_subcommand("certcheck", "verify certificates and outcome records");
  std::vector<std::string> cc_in;
  cc->add_option("--in", cc_in, "files to check")->required();

  auto* en = app.add_subcommand("enumerate", "list solutions in a box");
  std::string en_instance;
  unsigned long xmax = 0, ymax = 0;
  bool en_json = false;
  en->add_option("--instance", en_instance, "a,b,c,r,s")->required();
  en->add_option("--xmax", xmax)->required();
  en->add_option("--ymax", ymax)->required();
  en->add_flag("--json", en_json);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kError;
  }

  try {
    if (*vt) return cmd_verify_theorem1(fixtures, vt_json);
    if (*fam) return cmd_families(family, fam_a, fam_e, value_cap, fam_out);
    if (*se) {
      std::map<std::string, std::string> kv;
      for (const auto& [k, v] : flags)
        if (v) kv[k] = *v;
      return cmd_search(kv, config_path, shards, jobs, resume, restart, stop_after, se_out, manifest, args);
    }
    if (*mg) return cmd_merge(mg_in, mg_out);
    if (*elim) {
      if (el_dir != "x" && el_dir != "y") throw UsageError("--direction must be x or y");
      return cmd_eliminate(el_set, el_instance, el_anchor, el_method, el_bound, el_digits,
                           el_given, el_dir[0], el_box, el_out);
    }
    if (*cc) return cmd_certcheck(cc_in);
    if (*en) return cmd_enumerate(en_instance, xmax, ymax, en_json);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kError;
  } catch (const sr::CheckpointError& e) {
    std::cerr << "checkpoint error: " << e.what() << "\n";
    return kError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kError;
  }
  return kError;
}

#include "pillai/search.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include "pillai/bounds.hpp"
#include "pillai/families.hpp"
#include "pillai/digest.hpp"

namespace pillai::search {

using arith::gcd;
using arith::Integer;
using arith::pow;
using model::Exponent;
using model::Instance;
using model::Pair;

std::string to_string(Case c) {
  switch (c) {
    case Case::c19b: return "19b";
    case Case::c21b: return "21b";
    case Case::c20b: return "20b";
  }
  return "?";
}

Case parse_case(const std::string& text) {
  if (text == "19b") return Case::c19b;
  if (text == "21b") return Case::c21b;
  if (text == "20b") return Case::c20b;
  throw std::invalid_argument("unknown case '" + text + "' (expected 19b, 21b or 20b)");
}

std::string to_string(Disposition d) {
  switch (d) {
    case Disposition::eliminated: return "eliminated";
    case Disposition::matches_theorem1: return "matches_theorem1";
    case Disposition::matches_family: return "matches_family";
    case Disposition::unresolved: return "unresolved";
  }
  return "?";
}

namespace {

Disposition parse_disposition(const std::string& text) {
  for (auto d : {Disposition::eliminated, Disposition::matches_theorem1, Disposition::matches_family,
                 Disposition::unresolved})
    if (to_string(d) == text) return d;
  throw std::invalid_argument("unknown disposition '" + text + "'");
}

int sgn(int e) { return (e & 1) ? -1 : 1; }

}  // namespace

bool Shard::owns(const Natural& outer) const {
  return mpz_fdiv_ui(outer.get_mpz_t(), modulus) == residue;
}

Shard parse_shard(const std::string& text) {
  const auto slash = text.find('/');
  if (slash == std::string::npos) throw std::invalid_argument("shard must look like i/m: '" + text + "'");
  Shard s;
  try {
    s.residue = std::stoul(text.substr(0, slash));
    s.modulus = std::stoul(text.substr(slash + 1));
  } catch (const std::exception&) {
    throw std::invalid_argument("shard must look like i/m: '" + text + "'");
  }
  if (s.modulus == 0 || s.residue >= s.modulus)
    throw std::invalid_argument("shard residue must be below the modulus: '" + text + "'");
  return s;
}

void SearchConfig::validate() const {
  if (shard.modulus == 0 || shard.residue >= shard.modulus)
    throw std::invalid_argument("search: shard residue must be below the modulus");
  if (bound < 2) throw std::invalid_argument("search: bound must be at least 2");
  if (outer_min < 2 || outer_max < outer_min) throw std::invalid_argument("search: empty or invalid outer range");
  if (kind == Case::c21b && a_max < 2) throw std::invalid_argument("search: case 21b needs a_max >= 2");
  if (signs.empty()) throw std::invalid_argument("search: no sign choices");
  for (int s : signs)
    if (s != 0 && s != 1) throw std::invalid_argument("search: signs must be 0 or 1");
  if (resume && checkpoint.empty()) throw std::invalid_argument("search: resume needs a checkpoint path");
}

nlohmann::json SearchConfig::fingerprint() const {
  std::vector<int> sg = signs;
  std::sort(sg.begin(), sg.end());
  sg.erase(std::unique(sg.begin(), sg.end()), sg.end());
  return {{"case", to_string(kind)},
          {"outer_min", arith::to_string(outer_min)},
          {"outer_max", arith::to_string(outer_max)},
          {"a_max", kind == Case::c21b ? arith::to_string(a_max) : std::string("-")},
          {"bound", arith::to_string(bound)},
          {"signs", sg},
          {"factor", {{"trial_bound", factor.trial_bound}, {"rho_iterations", factor.rho_iterations}}},
          {"effort",
           {{"rounds", effort.rounds},
            {"factor_digits", effort.factor_digits},
            {"sieve_k", effort.sieve_k},
            {"divisors_per_round", effort.divisors_per_round}}},
          {"digits", digits}};
}

std::string Record::key() const {
  return set ? model::to_text(*set) : "~" + provenance.dump();
}

std::size_t SearchOutcome::unresolved() const {
  return static_cast<std::size_t>(std::count_if(records.begin(), records.end(), [](const Record& r) {
    return r.disposition == Disposition::unresolved;
  }));
}

// ---- family parameters as JSON -------------------------------------------

namespace {

nlohmann::json params_json(const families::FamilyParams& p) {
  return {{"id", families::to_string(p.id)},
          {"a", arith::to_string(p.a)},
          {"b", arith::to_string(p.b)},
          {"d", p.d}, {"k", p.k}, {"g", p.g}, {"x", p.x}, {"x2", p.x2}, {"x3", p.x3}, {"m", p.m},
          {"m1", p.m1}, {"u", p.u}, {"v", p.v}, {"t", p.t}, {"w", p.w},
          {"upper", p.upper}, {"half_k", p.half_k}};
}

families::FamilyParams params_from_json(const nlohmann::json& j) {
  families::FamilyParams p;
  p.id = families::parse_family_id(j.at("id").get<std::string>());
  p.a = Natural(j.at("a").get<std::string>());
  p.b = Natural(j.at("b").get<std::string>());
  j.at("d").get_to(p.d); j.at("k").get_to(p.k); j.at("g").get_to(p.g); j.at("x").get_to(p.x);
  j.at("x2").get_to(p.x2); j.at("x3").get_to(p.x3); j.at("m").get_to(p.m); j.at("m1").get_to(p.m1);
  j.at("u").get_to(p.u); j.at("v").get_to(p.v); j.at("t").get_to(p.t); j.at("w").get_to(p.w);
  j.at("upper").get_to(p.upper); j.at("half_k").get_to(p.half_k);
  return p;
}

}  // namespace

Record dispose(const SolutionSet& triple, nlohmann::json provenance, const SearchConfig& cfg) {
  Record rec;
  rec.set = triple;
  rec.provenance = std::move(provenance);
  if (auto m = model::matches_theorem1(triple)) {
    rec.disposition = Disposition::matches_theorem1;
    rec.detail = {{"row", m->row},
                  {"via", m->via == model::Via::direct ? "direct" : "associate"},
                  {"matched", model::to_text(m->matched)},
                  {"witness", model::to_json(m->witness)}};
    return rec;
  }
  if (auto f = families::matches_family(triple)) {
    rec.disposition = Disposition::matches_family;
    rec.detail = {{"family", families::to_string(f->params.id)},
                  {"params", params_json(f->params)},
                  {"describe", families::describe(f->params)},
                  {"via_associate", f->via_associate}};
    return rec;
  }
  eliminate::EliminateConfig ec;
  ec.bound = cfg.bound;
  ec.digits = cfg.digits;
  ec.effort = cfg.effort;
  ec.effort.factor = cfg.factor;
  try {
    auto out = eliminate::eliminate_fourth(triple, ec);
    if (auto* cert = std::get_if<eliminate::Certificate>(&out)) {
      rec.disposition = Disposition::eliminated;
      rec.detail = eliminate::to_json(*cert);
    } else {
      rec.disposition = Disposition::unresolved;
      rec.detail = {{"reason", std::get<eliminate::CannotEliminate>(out).reason}};
    }
  } catch (const std::exception& e) {
    rec.disposition = Disposition::unresolved;
    rec.detail = {{"reason", std::string("elimination failed: ") + e.what()}};
  }
  return rec;
}

// ---- drivers ---------------------------------------------------------------

namespace {

using Counters = std::map<std::string, std::uint64_t>;

struct Emitter {
  const SearchConfig& cfg;
  Counters& counters;
  std::vector<Record>& records;
  std::set<std::string> seen;

  // Builds the set, checks the side conditions and settles it.
  void triple(const Instance& in, const std::vector<Pair>& pairs, nlohmann::json prov) {
    if (in.c < 1 || in.r < 1 || in.s < 1) return void(++counters["rejected_values"]);
    if (gcd(in.r * in.a, in.s * in.b) != 1) return void(++counters["rejected_gcd"]);
    SolutionSet set;
    try {
      set = model::make_set(in, pairs);
    } catch (const std::invalid_argument&) {
      return void(++counters["rejected_signs"]);
    }
    const std::string key = model::to_text(set);
    if (!seen.insert(key).second) return void(++counters["duplicates"]);
    ++counters["triples"];
    Record rec = dispose(set, std::move(prov), cfg);
    ++counters["disposition." + to_string(rec.disposition)];
    if (rec.disposition == Disposition::eliminated)
      ++counters["method." + rec.detail.at("method").get<std::string>()];
    records.push_back(std::move(rec));
  }

  void timeout(nlohmann::json prov, const arith::FactorTimeout& e) {
    ++counters["factor_timeouts"];
    nlohmann::json left = nlohmann::json::array();
    for (const auto& c : e.cofactors()) left.push_back(arith::to_string(c));
    Record rec;
    rec.provenance = std::move(prov);
    rec.disposition = Disposition::unresolved;
    rec.detail = {{"reason", "factorization gave up"}, {"cofactors", left}};
    ++counters["disposition.unresolved"];
    records.push_back(std::move(rec));
  }
};

// a^x2 | b^g1 + (-1)^delta, b^y2 | a^g2 + (-1)^gamma.
void outer_19b(const Natural& b, Emitter& em) {
  const auto& cfg = em.cfg;
  for (int delta : cfg.signs) {
    Natural bg = b;
    for (Exponent g1 = 1; bg <= cfg.bound; ++g1, bg *= b) {
      const Natural N = bg + sgn(delta);
      if (N < 2) continue;
      const nlohmann::json base = {{"b", arith::to_string(b)}, {"delta", delta}, {"y3-y2", g1}};
      arith::Factorization f;
      try {
        f = arith::factor(N, cfg.factor);
        ++em.counters["factorizations"];
      } catch (const arith::FactorTimeout& e) {
        em.timeout(base, e);
        continue;
      }
      for (const Natural& D : arith::divisors(f)) {
        if (D < 2) continue;
        const auto root = arith::minimal_root(D);
        const Natural& a = root.base;
        const Exponent x2 = root.exponent;
        if (a <= b) continue;
        Natural ag = a;
        for (Exponent g2 = 1; ag <= cfg.bound; ++g2, ag *= a) {
          for (int gamma : {0, 1}) {
            const Natural M = ag + sgn(gamma);
            const Natural h = gcd(M, N);
            const Natural Nh = N / h, Mh = M / h;
            if (Nh % D != 0) continue;
            const Natural r = Nh / D;
            Natural by = b;
            for (Exponent y2 = 1; Mh % by == 0; ++y2, by *= b) {
              const Natural s = Mh / by;
              Integer diff = r * D - s * by;
              const Natural c = abs(diff);
              bool first = false;
              for (int alpha : {0, 1})
                for (int beta : {0, 1})
                  if (r * (D + sgn(alpha)) == s * (by + sgn(beta))) first = true;
              if (!first) continue;
              auto prov = base;
              prov["a"] = arith::to_string(a);
              prov["x2"] = x2;
              prov["x3-x2"] = g2;
              prov["gamma"] = gamma;
              prov["y2"] = y2;
              em.triple({a, b, c, r, s}, {{0, 0}, {x2, y2}, {x2 + g2, y2 + g1}}, prov);
            }
          }
        }
      }
    }
  }
}

// a^x2 | b^y3 + (-1)^nu; y1 from the power of b in a^x3 + (-1)^eta.
void outer_21b(const Natural& b, Emitter& em) {
  const auto& cfg = em.cfg;
  if (b >= cfg.a_max) return;  // a > b is required
  const Natural T = bounds::sigma_ceiling(b, cfg.a_max);
  const Exponent y3_max = bounds::sigma_divisibility_cut(T, b, cfg.bound);
  em.counters["y3_ceiling_sum"] += y3_max;
  for (int nu : cfg.signs) {
    Natural by3 = b;
    for (Exponent y3 = 1; y3 <= y3_max; ++y3, by3 *= b) {
      const Natural N = by3 + sgn(nu);
      if (N < 2) continue;
      const nlohmann::json base = {{"b", arith::to_string(b)}, {"nu", nu}, {"y3", y3}};
      arith::Factorization f;
      try {
        f = arith::factor(N, cfg.factor);
        ++em.counters["factorizations"];
      } catch (const arith::FactorTimeout& e) {
        em.timeout(base, e);
        continue;
      }
      for (const Natural& D : arith::divisors(f)) {
        if (D < 2) continue;
        const auto root = arith::minimal_root(D);
        const Natural& a = root.base;
        const Exponent x2 = root.exponent;
        if (a <= b || a > cfg.a_max) continue;
        Natural ag = a;
        for (Exponent g2 = 1; ag <= cfg.bound; ++g2, ag *= a) {
          const Exponent x3 = x2 + g2;
          const Natural ax3 = D * ag;
          for (int mu : {0, 1}) {
            const Natural M = ag + sgn(mu);
            const Natural h = gcd(M, N);
            const Natural Nh = N / h;
            if (Nh % D != 0) continue;
            const Natural r = Nh / D, s = M / h;
            for (int eta : {0, 1}) {
              const Natural A = ax3 + sgn(eta);
              // b^y1 || A only when b and s are coprime, so every y1 < y3
              // with b^y1 | r A is tried.
              const Natural rA = r * A;
              Natural by1 = b;
              for (Exponent y1 = 1; y1 < y3 && rA % by1 == 0; ++y1, by1 *= b) {
                const Natural rest = by3 / by1;
                bool third = false;
                for (int theta : {0, 1})
                  if (rA == s * by1 * (rest + sgn(theta))) third = true;
                if (!third) continue;
                const Integer diff = r * ax3 - s * by3;
                auto prov = base;
                prov["a"] = arith::to_string(a);
                prov["x2"] = x2;
                prov["x3-x2"] = g2;
                prov["mu"] = mu;
                prov["eta"] = eta;
                prov["y1"] = y1;
                em.triple({a, b, Natural(abs(diff)), r, s}, {{0, y1}, {x2, 0}, {x3, y3}}, prov);
              }
            }
          }
        }
      }
    }
  }
}

// b^y3 = 2 (a^x3 + (-1)^(alpha+beta)) / (a^x2 + (-1)^alpha) - (-1)^beta.
void outer_20b(const Natural& a, Emitter& em) {
  const auto& cfg = em.cfg;
  const Natural r = mpz_odd_p(a.get_mpz_t()) ? 1 : 2;
  const Natural x2_cap = 2 * (cfg.bound + 1) + 1;
  Natural ax2 = a;
  for (Exponent x2 = 1; ax2 <= x2_cap; ++x2, ax2 *= a) {
    Natural ag = a;
    for (Exponent g2 = 1; ag <= cfg.bound; ++g2, ag *= a) {
      if (a > 3 && g2 % x2 != 0) continue;
      const Exponent x3 = x2 + g2;
      const Natural ax3 = ax2 * ag;
      for (int alpha : cfg.signs) {
        const Natural P = ax2 + sgn(alpha);
        const Natural s = r * P / 2;
        const Integer c = s - sgn(alpha) * r;
        if (s < 1 || c < 1) continue;
        for (int beta : {0, 1}) {
          const Natural Q = 2 * (ax3 + sgn(alpha + beta));
          if (Q % P != 0) continue;
          const Integer V = Q / P - sgn(beta);
          if (V < 2) continue;
          const auto root = arith::minimal_root(V);
          nlohmann::json prov = {{"a", arith::to_string(a)}, {"x2", x2}, {"x3-x2", g2},
                                 {"alpha", alpha}, {"beta", beta}, {"r", arith::to_string(r)}};
          ++em.counters["integral_b"];
          em.triple({a, root.base, c, r, s}, {{0, 0}, {x2, 0}, {x3, root.exponent}}, prov);
        }
      }
    }
  }
}

// ---- checkpoints -------------------------------------------------------------

nlohmann::json counters_json(const Counters& c) {
  nlohmann::json j = nlohmann::json::object();
  for (const auto& [k, v] : c) j[k] = v;
  return j;
}

struct Progress {
  std::optional<Natural> last;
  Counters counters;
  std::vector<Record> records;
};

void save_checkpoint(const SearchConfig& cfg, const Progress& p) {
  nlohmann::json body = {{"schema", 1},
                         {"kind", "checkpoint"},
                         {"fingerprint", cfg.fingerprint()},
                         {"shard", std::to_string(cfg.shard.residue) + "/" + std::to_string(cfg.shard.modulus)},
                         {"last_completed", p.last ? arith::to_string(*p.last) : std::string()},
                         {"counters", counters_json(p.counters)}};
  nlohmann::json recs = nlohmann::json::array();
  for (const auto& r : p.records) recs.push_back(to_json(r));
  body["records"] = recs;
  nlohmann::json file = {{"body", body}, {"sha256", sha256_hex(body.dump())}};
  const std::string tmp = cfg.checkpoint + ".tmp";
  {
    std::ofstream os(tmp, std::ios::trunc);
    if (!os) throw CheckpointError("cannot write checkpoint " + tmp);
    os << file.dump() << '\n';
    if (!os) throw CheckpointError("cannot write checkpoint " + tmp);
  }
  std::filesystem::rename(tmp, cfg.checkpoint);
}

Progress load_checkpoint(const SearchConfig& cfg) {
  std::ifstream is(cfg.checkpoint);
  std::stringstream ss;
  ss << is.rdbuf();
  nlohmann::json file;
  try {
    file = nlohmann::json::parse(ss.str());
  } catch (const std::exception&) {
    throw CheckpointError("checkpoint " + cfg.checkpoint + " is not valid JSON; rerun with the restart flag");
  }
  if (!file.is_object() || !file.contains("body") || !file.contains("sha256") ||
      sha256_hex(file["body"].dump()) != file["sha256"])
    throw CheckpointError("checkpoint " + cfg.checkpoint + " fails its digest; rerun with the restart flag");
  const auto& body = file["body"];
  if (body.value("fingerprint", nlohmann::json()) != cfg.fingerprint())
    throw CheckpointError("checkpoint " + cfg.checkpoint + " was written for a different configuration");
  const std::string shard = std::to_string(cfg.shard.residue) + "/" + std::to_string(cfg.shard.modulus);
  if (body.value("shard", std::string()) != shard)
    throw CheckpointError("checkpoint " + cfg.checkpoint + " belongs to another shard");
  Progress p;
  const std::string last = body.at("last_completed").get<std::string>();
  if (!last.empty()) p.last = Natural(last);
  for (const auto& [k, v] : body.at("counters").items()) p.counters[k] = v.get<std::uint64_t>();
  for (const auto& r : body.at("records")) p.records.push_back(record_from_json(r));
  return p;
}

void sort_records(std::vector<Record>& recs) {
  std::stable_sort(recs.begin(), recs.end(), [](const Record& x, const Record& y) { return x.key() < y.key(); });
  recs.erase(std::unique(recs.begin(), recs.end(),
                         [](const Record& x, const Record& y) { return x.key() == y.key(); }),
             recs.end());
}

template <class Outer>
SearchOutcome drive(const SearchConfig& cfg, Case kind, Outer outer) {
  if (cfg.kind != kind) throw std::invalid_argument("search: configuration is for case " + to_string(cfg.kind));
  cfg.validate();
  const auto start = std::chrono::steady_clock::now();
  Progress p;
  if (!cfg.checkpoint.empty() && cfg.resume && std::filesystem::exists(cfg.checkpoint)) {
    try {
      p = load_checkpoint(cfg);
    } catch (const CheckpointError&) {
      if (!cfg.restart) throw;
      p = Progress{};
    }
  }
  SearchOutcome out;
  out.kind = kind;
  unsigned long done_now = 0;
  Natural o = p.last ? Natural(*p.last + 1) : cfg.outer_min;
  for (; o <= cfg.outer_max; ++o) {
    if (!cfg.shard.owns(o)) continue;
    if (cfg.stop_after && done_now == cfg.stop_after) {
      out.interrupted = true;
      break;
    }
    if (!arith::is_perfect_power(o)) {
      ++p.counters["outer_values"];
      std::vector<Record> recs;
      Emitter em{cfg, p.counters, recs, {}};
      outer(o, em);
      for (auto& r : recs) p.records.push_back(std::move(r));
    }
    p.last = o;
    ++done_now;
    if (!cfg.checkpoint.empty()) save_checkpoint(cfg, p);
  }
  out.records = std::move(p.records);
  sort_records(out.records);
  out.counters = std::move(p.counters);
  out.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return out;
}

}  // namespace

SearchOutcome search_19b(const SearchConfig& cfg) { return drive(cfg, Case::c19b, outer_19b); }
SearchOutcome search_21b(const SearchConfig& cfg) { return drive(cfg, Case::c21b, outer_21b); }
SearchOutcome search_20b(const SearchConfig& cfg) { return drive(cfg, Case::c20b, outer_20b); }

SearchOutcome run(const SearchConfig& cfg) {
  switch (cfg.kind) {
    case Case::c19b: return search_19b(cfg);
    case Case::c21b: return search_21b(cfg);
    case Case::c20b: return search_20b(cfg);
  }
  throw std::invalid_argument("search: bad case");
}

// ---- shards ----------------------------------------------------------------

void validate_shards(const std::vector<Shard>& shards) {
  if (shards.empty()) throw std::invalid_argument("shards: none given");
  const unsigned long m = shards.front().modulus;
  std::vector<bool> hit(m, false);
  for (const auto& s : shards) {
    if (s.modulus != m) throw std::invalid_argument("shards: moduli differ");
    if (s.residue >= m) throw std::invalid_argument("shards: residue not below modulus");
    if (hit[s.residue]) throw std::invalid_argument("shards: residue " + std::to_string(s.residue) + " given twice");
    hit[s.residue] = true;
  }
  if (std::find(hit.begin(), hit.end(), false) != hit.end())
    throw std::invalid_argument("shards: residues do not cover the modulus");
}

SearchOutcome merge(const std::vector<SearchOutcome>& parts) {
  SearchOutcome out;
  if (!parts.empty()) out.kind = parts.front().kind;
  for (const auto& p : parts) {
    if (p.kind != out.kind) throw std::invalid_argument("merge: outcomes of different cases");
    out.records.insert(out.records.end(), p.records.begin(), p.records.end());
    for (const auto& [k, v] : p.counters) out.counters[k] += v;
    out.seconds += p.seconds;
    out.interrupted = out.interrupted || p.interrupted;
  }
  sort_records(out.records);
  return out;
}

SearchOutcome run_sharded(const SearchConfig& cfg, const std::vector<Shard>& shards, unsigned jobs) {
  validate_shards(shards);
  std::vector<SearchOutcome> parts(shards.size());
  std::vector<std::exception_ptr> errors(shards.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i; (i = next++) < shards.size();) {
      try {
        SearchConfig c = cfg;
        c.shard = shards[i];
        if (!cfg.checkpoint.empty())
          c.checkpoint = cfg.checkpoint + ".shard" + std::to_string(shards[i].residue) + "of" +
                         std::to_string(shards[i].modulus);
        parts[i] = run(c);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < std::max(1u, std::min<unsigned>(jobs, shards.size())); ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return merge(parts);
}

// ---- serialization -----------------------------------------------------------

nlohmann::json to_json(const Record& r) {
  return {{"schema", 1},
          {"key", r.key()},
          {"set", r.set ? model::to_json(*r.set) : nlohmann::json(nullptr)},
          {"provenance", r.provenance},
          {"disposition", to_string(r.disposition)},
          {"detail", r.detail}};
}

Record record_from_json(const nlohmann::json& j) {
  if (j.value("schema", 0) != 1) throw std::invalid_argument("record: unsupported schema");
  Record r;
  if (!j.at("set").is_null()) r.set = model::set_from_json(j.at("set"));
  r.provenance = j.at("provenance");
  r.disposition = parse_disposition(j.at("disposition").get<std::string>());
  r.detail = j.at("detail");
  return r;
}

std::string serialize(const SearchOutcome& out, const nlohmann::json& fingerprint, const std::string& shard) {
  nlohmann::json header = {{"schema", 1},
                           {"kind", "search_outcome"},
                           {"case", to_string(out.kind)},
                           {"config", fingerprint},
                           {"counters", counters_json(out.counters)},
                           {"records", out.records.size()},
                           {"unresolved", out.unresolved()},
                           {"complete", !out.interrupted}};
  if (!shard.empty()) header["shard"] = shard;
  std::string text = header.dump() + '\n';
  for (const auto& r : out.records) text += to_json(r).dump() + '\n';
  return text;
}

std::string serialize(const SearchOutcome& out, const SearchConfig& cfg) {
  const std::string shard =
      cfg.shard.modulus > 1 ? std::to_string(cfg.shard.residue) + "/" + std::to_string(cfg.shard.modulus) : "";
  return serialize(out, cfg.fingerprint(), shard);
}

ParsedOutcome parse_outcome(const std::string& text) {
  ParsedOutcome out;
  std::istringstream is(text);
  std::string line;
  std::size_t n = 0;
  while (std::getline(is, line)) {
    ++n;
    if (line.empty()) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const std::exception& e) {
      throw std::invalid_argument("line " + std::to_string(n) + ": " + e.what());
    }
    if (j.value("kind", std::string()) == "search_outcome") out.header = j;
    else out.records.push_back(record_from_json(j));
  }
  return out;
}

SearchOutcome to_outcome(const ParsedOutcome& parsed) {
  SearchOutcome out;
  if (parsed.header.is_null()) throw std::invalid_argument("outcome: no header line");
  out.kind = parse_case(parsed.header.at("case").get<std::string>());
  for (const auto& [k, v] : parsed.header.at("counters").items()) out.counters[k] = v.get<std::uint64_t>();
  out.interrupted = !parsed.header.value("complete", true);
  out.records = parsed.records;
  sort_records(out.records);
  return out;
}

std::string check_record(const Record& r) {
  try {
    switch (r.disposition) {
      case Disposition::eliminated: {
        const auto cert = eliminate::certificate_from_json(r.detail);
        if (r.set && !(cert.known == *r.set)) return "certificate is for a different set";
        const auto rep = eliminate::verify_certificate(cert);
        if (!rep.ok) {
          std::string why;
          for (const auto& s : rep.reasons) why += (why.empty() ? "" : "; ") + s;
          return why;
        }
        return "";
      }
      case Disposition::matches_theorem1: {
        if (!r.set) return "no set";
        const auto matched = model::parse_set(r.detail.at("matched").get<std::string>());
        const int row = r.detail.at("row").get<int>();
        const auto& rows = model::theorem1_rows();
        if (row < 1 || row > static_cast<int>(rows.size())) return "row out of range";
        const auto& full = rows[static_cast<std::size_t>(row - 1)];
        if (!model::is_subset_of(matched, full) && !model::is_subset_of(matched, model::associate(full)))
          return "matched set is not a subset of the row";
        const auto w = model::same_family(*r.set, matched);
        if (!w || !model::check_witness(*r.set, matched, *w)) return "witness does not re-validate";
        return "";
      }
      case Disposition::matches_family: {
        if (!r.set) return "no set";
        const auto gen = families::generate(params_from_json(r.detail.at("params")));
        const auto target = r.detail.at("via_associate").get<bool>() ? model::associate(gen) : gen;
        if (!model::same_family(*r.set, target)) return "set is not in the family of the generated member";
        return "";
      }
      case Disposition::unresolved: return "";
    }
  } catch (const std::exception& e) {
    return e.what();
  }
  return "unknown disposition";
}

}  // namespace pillai::search

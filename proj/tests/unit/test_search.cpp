#include "doctest.h"

#include <filesystem>
#include <fstream>

#include "../oracle/search_oracle.hpp"
#include "pillai/eliminate.hpp"
#include "pillai/families.hpp"
#include "pillai/search.hpp"

using namespace pillai::search;
using pillai::model::parse_set;

namespace {

SearchConfig desk(Case kind, unsigned long box) {
  SearchConfig cfg;
  cfg.kind = kind;
  cfg.outer_max = box;
  cfg.a_max = box;
  return cfg;
}

std::set<std::string> keys(const SearchOutcome& out) {
  std::set<std::string> k;
  for (const auto& r : out.records)
    if (r.set) k.insert(oracle::key_of(*r.set));
  return k;
}

void check_complete(const std::set<std::string>& want, const SearchOutcome& out) {
  const auto have = keys(out);
  std::size_t missing = 0;
  for (const auto& k : want)
    if (!have.count(k)) {
      if (++missing <= 5) MESSAGE("missing " << k);
    }
  CHECK(missing == 0);
  CHECK(out.unresolved() == 0);
  for (const auto& r : out.records) {
    CAPTURE(r.key());
    CHECK(check_record(r) == "");
  }
}

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("pillai_test_" + name)).string();
}

}  // namespace

TEST_CASE("19b driver finds every oracle configuration") {
  const auto out = search_19b(desk(Case::c19b, 30));
  const auto want = oracle::configs_19b(30, 1000000);
  CHECK(want.size() > 20);
  check_complete(want, out);
}

TEST_CASE("21b driver finds every oracle configuration") {
  const auto out = search_21b(desk(Case::c21b, 30));
  const auto want = oracle::configs_21b(30, 30, 1000000);
  CHECK(want.size() > 5);
  check_complete(want, out);
}

TEST_CASE("20b driver finds every oracle configuration") {
  const auto out = search_20b(desk(Case::c20b, 30));
  const auto want = oracle::configs_20b(30, 1000000);
  CHECK(want.size() > 50);
  check_complete(want, out);
}

TEST_CASE("20b candidates") {
  const auto out = search_20b(desk(Case::c20b, 60));
  // The (66) member with a = 4 appears rebased to a = 2.
  CHECK(keys(out).count(oracle::key_of(parse_set("(4,9,5,2,3; 0,0,1,0,2,1)"))));
  for (const auto& r : out.records) {
    REQUIRE(r.set);
    const auto& in = r.set->instance;
    CHECK(in.r == (mpz_odd_p(in.a.get_mpz_t()) ? 1 : 2));
  }
}

TEST_CASE("b = 2 branch of 19b") {
  const auto out = search_19b(desk(Case::c19b, 2));
  int fam63 = 0;
  for (const auto& r : out.records) {
    CHECK(r.disposition != Disposition::unresolved);
    if (r.disposition == Disposition::matches_family) {
      CHECK(r.detail["family"] != "65");
      fam63 += r.detail["family"] == "63";
    }
  }
  CHECK(fam63 > 5);
  // (65) members repeat y1 = y3, which no 19b triple does.
  pillai::families::FamilyParams p;
  p.id = pillai::families::FamilyId::f65;
  p.g = 4;
  const auto m = pillai::families::generate(p);
  CHECK(m.solutions.front().y == m.solutions.back().y);
}

TEST_CASE("21b recognizes (10a) members before eliminating") {
  const auto out = search_21b(desk(Case::c21b, 60));
  int k2 = 0, k3 = 0;
  for (const auto& r : out.records)
    if (r.disposition == Disposition::matches_family && r.detail["family"] == "10a") {
      const auto k = r.detail["params"]["k"].get<unsigned long>();
      k2 += k == 2;
      k3 += k == 3;
    }
  CHECK(k2 > 0);
  CHECK(k3 > 0);
}

TEST_CASE("21b reaches the two sets with b = 1477") {
  SearchConfig cfg;
  cfg.kind = Case::c21b;
  cfg.outer_min = cfg.outer_max = 1477;
  cfg.a_max = 56745;
  cfg.bound = 800000000000000;
  const auto out = search_21b(cfg);
  CHECK(out.unresolved() == 0);
  for (const char* text : {"(56744,1477,83810889,1478,56743; 0,1,1,0,3,4)",
                           "(56745,1477,41906182,739,28373; 0,1,1,0,3,4)"}) {
    CAPTURE(text);
    const auto set = parse_set(text);
    CHECK(keys(out).count(oracle::key_of(set)));
    const auto anchor = set.solutions.back();
    auto boot = pillai::eliminate::bootstrap_all(set.instance, anchor, cfg.bound);
    REQUIRE(std::holds_alternative<pillai::eliminate::Certificate>(boot));
    CHECK(pillai::eliminate::verify_certificate(std::get<pillai::eliminate::Certificate>(boot)).ok);
  }
}

TEST_CASE("sharded runs merge to the single run") {
  for (Case kind : {Case::c19b, Case::c21b, Case::c20b}) {
    const auto cfg = desk(kind, 40);
    const std::string one = serialize(run(cfg), cfg);
    const std::vector<Shard> four{{4, 0}, {4, 1}, {4, 2}, {4, 3}};
    CHECK(serialize(run_sharded(cfg, four, 1), cfg) == one);
    CHECK(serialize(run_sharded(cfg, {{4, 3}, {4, 1}, {4, 0}, {4, 2}}, 4), cfg) == one);
    // Merging is order independent.
    std::vector<SearchOutcome> parts;
    for (const auto& s : four) {
      auto c = cfg;
      c.shard = s;
      parts.push_back(run(c));
    }
    std::reverse(parts.begin(), parts.end());
    CHECK(serialize(merge(parts), cfg) == one);
  }
}

TEST_CASE("shard validation") {
  CHECK_THROWS(validate_shards({{4, 0}, {4, 1}, {4, 1}, {4, 3}}));
  CHECK_THROWS(validate_shards({{4, 0}, {4, 1}, {4, 2}}));
  CHECK_THROWS(validate_shards({{4, 0}, {2, 1}}));
  CHECK_NOTHROW(validate_shards({{2, 1}, {2, 0}}));
  CHECK_THROWS(parse_shard("4/4"));
  CHECK(parse_shard("1/4") == Shard{4, 1});
  // A shard owning no outer value gives an empty outcome.
  auto cfg = desk(Case::c20b, 6);
  cfg.outer_min = 5;
  cfg.shard = {4, 0};
  const auto out = run(cfg);
  CHECK(out.records.empty());
}

TEST_CASE("kill and resume reproduce the uninterrupted run") {
  auto cfg = desk(Case::c20b, 40);
  const std::string full = serialize(run(cfg), cfg);
  const std::string ck = temp_path("resume.ckpt");
  std::filesystem::remove(ck);
  cfg.checkpoint = ck;
  cfg.resume = true;
  cfg.stop_after = 7;
  auto part = run(cfg);
  CHECK(part.interrupted);
  cfg.stop_after = 0;
  auto rest = run(cfg);
  CHECK_FALSE(rest.interrupted);
  CHECK(serialize(rest, cfg) == full);

  // A damaged checkpoint is refused unless restarting is allowed.
  cfg.stop_after = 5;
  std::filesystem::remove(ck);
  run(cfg);
  {
    std::fstream f(ck, std::ios::in | std::ios::out);
    f.seekp(40);
    f << "###";
  }
  cfg.stop_after = 0;
  CHECK_THROWS_AS(run(cfg), CheckpointError);
  cfg.restart = true;
  CHECK(serialize(run(cfg), cfg) == full);

  // A checkpoint from another configuration is refused.
  cfg.restart = false;
  cfg.stop_after = 3;
  std::filesystem::remove(ck);
  run(cfg);
  cfg.bound = 999999;
  CHECK_THROWS_AS(run(cfg), CheckpointError);
  std::filesystem::remove(ck);
}

TEST_CASE("outcome files round trip") {
  const auto cfg = desk(Case::c19b, 30);
  const auto out = run(cfg);
  const std::string text = serialize(out, cfg);
  const auto parsed = parse_outcome(text);
  CHECK(parsed.header["case"] == "19b");
  REQUIRE(parsed.records.size() == out.records.size());
  for (std::size_t i = 0; i < out.records.size(); ++i) {
    CHECK(to_json(parsed.records[i]) == to_json(out.records[i]));
    CHECK(check_record(parsed.records[i]) == "");
  }
  // A tampered certificate is reported.
  auto bad = parsed.records;
  for (auto& r : bad)
    if (r.disposition == Disposition::eliminated) {
      r.set->instance.c += 2;
      CHECK(check_record(r) != "");
      break;
    }
}

TEST_CASE("configuration validation") {
  SearchConfig cfg;
  cfg.shard = {4, 4};
  CHECK_THROWS(cfg.validate());
  cfg = SearchConfig{};
  cfg.bound = 0;
  CHECK_THROWS(cfg.validate());
  cfg = SearchConfig{};
  cfg.signs = {2};
  CHECK_THROWS(cfg.validate());
  cfg = SearchConfig{};
  cfg.kind = Case::c20b;
  CHECK_THROWS(search_19b(cfg));
  CHECK_THROWS(parse_case("22b"));
}

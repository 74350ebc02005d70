#pragma once

// Case drivers that enumerate candidate three-solution sets and settle each
// one: a classification row, an infinite family, or a certificate that no
// fourth solution exists below the configured bound.

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "pillai/arith.hpp"
#include "pillai/eliminate.hpp"
#include "pillai/model.hpp"

namespace pillai::search {

using arith::Natural;
using model::SolutionSet;

// Orderings of the first three solutions, x1 = 0 < x2 < x3 throughout:
//   c19b: 0 = y1 < y2 < y3
//   c21b: 0 = y2 < y1 < y3
//   c20b: 0 = y1 = y2 < y3
enum class Case { c19b, c21b, c20b };
std::string to_string(Case c);
Case parse_case(const std::string& text);

struct Shard {
  unsigned long modulus = 1, residue = 0;
  bool owns(const Natural& outer) const;
  bool operator==(const Shard&) const = default;
};
// "i/m"
Shard parse_shard(const std::string& text);

class CheckpointError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SearchConfig {
  Case kind = Case::c19b;
  // Outer loop: b for c19b and c21b, a for c20b.
  Natural outer_min = 2, outer_max = 60;
  // Cap on the inner base a (c21b only; required there).
  Natural a_max = 60;
  // Global bound on exponents and coefficients.
  Natural bound = 1000000;
  // Outer sign choices: delta (c19b), nu (c21b), alpha (c20b).
  std::vector<int> signs{0, 1};
  Shard shard;
  std::string checkpoint;  // empty: none
  bool resume = false;
  bool restart = false;    // discard an unusable checkpoint instead of failing
  // Test hook: stop after this many outer values, as if killed.
  unsigned long stop_after = 0;
  arith::FactorOptions factor;
  eliminate::EffortCaps effort;
  long digits = arith::kDefaultDigits;

  void validate() const;
  // Everything that affects the outcome, without shard or checkpoint data.
  nlohmann::json fingerprint() const;
};

enum class Disposition { eliminated, matches_theorem1, matches_family, unresolved };
std::string to_string(Disposition d);

struct Record {
  std::optional<SolutionSet> set;  // absent when a factorization gave up
  nlohmann::json provenance;
  Disposition disposition = Disposition::unresolved;
  // Certificate, row match, family match or reason, by disposition.
  nlohmann::json detail;

  std::string key() const;
};

struct SearchOutcome {
  Case kind = Case::c19b;
  std::vector<Record> records;  // sorted by key, one per candidate
  std::map<std::string, std::uint64_t> counters;
  double seconds = 0;           // not serialized
  bool interrupted = false;

  std::size_t unresolved() const;
};

SearchOutcome search_19b(const SearchConfig& cfg);
SearchOutcome search_21b(const SearchConfig& cfg);
SearchOutcome search_20b(const SearchConfig& cfg);
SearchOutcome run(const SearchConfig& cfg);

// Shards must share one modulus and cover each residue exactly once.
void validate_shards(const std::vector<Shard>& shards);
// Runs each shard (up to `jobs` at a time) and merges the results.
SearchOutcome run_sharded(const SearchConfig& cfg, const std::vector<Shard>& shards, unsigned jobs = 1);
// Associative and commutative; records are re-sorted and deduplicated.
SearchOutcome merge(const std::vector<SearchOutcome>& parts);

// Settles one candidate: classification row, then family, then elimination.
Record dispose(const SolutionSet& triple, nlohmann::json provenance, const SearchConfig& cfg);

// JSON lines: a header with the configuration fingerprint and counters,
// then one record per line.
// A partial shard carries its "i/m" label in the header.
std::string serialize(const SearchOutcome& out, const SearchConfig& cfg);
std::string serialize(const SearchOutcome& out, const nlohmann::json& fingerprint,
                      const std::string& shard = "");
nlohmann::json to_json(const Record& r);
Record record_from_json(const nlohmann::json& j);

struct ParsedOutcome {
  nlohmann::json header;
  std::vector<Record> records;
};
ParsedOutcome parse_outcome(const std::string& text);
// Counters come from the header; records are re-sorted.
SearchOutcome to_outcome(const ParsedOutcome& parsed);

// Re-checks one record: certificates verify, row and family matches
// re-validate. Returns an empty string when the record checks.
std::string check_record(const Record& r);

}  // namespace pillai::search

#pragma once

// Equations (-1)^u r a^x + (-1)^v s b^y = c, their solution sets, and the
// relations between sets: basic form, associate, subset, family.

#include <compare>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include "json.hpp"
#include "pillai/arith.hpp"

namespace pillai::model {

using arith::Integer;
using arith::Natural;
using Exponent = unsigned long;

struct Instance {
  Natural a, b, c, r, s;

  // Throws std::invalid_argument unless a, b > 1 and c, r, s > 0.
  void validate() const;
  bool operator==(const Instance&) const = default;
  std::strong_ordering operator<=>(const Instance& o) const;
};

struct Solution {
  Exponent x = 0, y = 0;
  int u = 0, v = 0;

  bool operator==(const Solution&) const = default;
  auto operator<=>(const Solution&) const = default;
};

using Pair = std::pair<Exponent, Exponent>;

struct SolutionSet {
  Instance instance;
  // Kept sorted by (x, y, u, v).
  std::vector<Solution> solutions;

  // Distinct (x, y) pairs.
  std::size_t pair_count() const;
  // Distinct (x, y, u, v) tuples.
  std::size_t tuple_count() const { return solutions.size(); }
  std::vector<Pair> pairs() const;
  bool operator==(const SolutionSet&) const = default;
};

bool evaluate(const Instance& inst, Exponent x, Exponent y, int u, int v);

// The sign pair (u, v) under which (x, y) solves the equation, if any. For
// c > 0 at most one pair can work.
std::optional<std::pair<int, int>> signs_for(const Instance& inst, Exponent x, Exponent y);

// Builds a set from exponent pairs, attaching signs. Throws
// std::invalid_argument naming the first pair that is not a solution.
SolutionSet make_set(const Instance& inst, const std::vector<Pair>& pairs);

// Every solution with x <= x_max, y <= y_max, sorted lexicographically.
SolutionSet enumerate_solutions(const Instance& inst, Exponent x_max, Exponent y_max);

class BasicFormError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

SolutionSet to_basic_form(const SolutionSet& set);
bool is_basic_form(const SolutionSet& set);

SolutionSet associate(const SolutionSet& set);
bool is_subset_of(const SolutionSet& sub, const SolutionSet& super);

struct FamilyWitness {
  mpq_class k;
  Natural base_a, base_b;
  // pairing[i] = j: solution i of the first set corresponds to solution j
  // of the second.
  std::vector<std::size_t> pairing;
};

std::optional<FamilyWitness> same_family(const SolutionSet& s1, const SolutionSet& s2);
// Checks every clause of the family definition for an explicit witness.
bool check_witness(const SolutionSet& s1, const SolutionSet& s2, const FamilyWitness& w);

// The nine rows listed by the classification theorem, 1-based in order.
const std::vector<SolutionSet>& theorem1_rows();

enum class Via { direct, associate };

struct Theorem1Match {
  int row = 0;
  Via via = Via::direct;
  // The subset (or its associate) that the input was matched against.
  SolutionSet matched;
  FamilyWitness witness;
};

std::optional<Theorem1Match> matches_theorem1(const SolutionSet& set);

struct GapDivisibility {
  enum class Kind { not_applicable, holds, violated } kind = Kind::not_applicable;
  int failed_condition = 0;
  std::string reason;
  Exponent box_x = 0, box_y = 0;
};

// Gap divisibility for the three smallest-x solutions. Condition 3 is checked
// by enumeration over [0, box_x] x [0, box_y]; zero box sizes pick a default
// of four times the largest exponent plus 8.
GapDivisibility check_gap_divisibility(const SolutionSet& set, Exponent box_x = 0,
                                       Exponent box_y = 0);

// Text form "(a,b,c,r,s; x1,y1,x2,y2,...)".
std::string to_text(const SolutionSet& set);
std::string to_text(const Instance& inst);
SolutionSet parse_set(const std::string& text);
// "a,b,c,r,s" with optional parentheses.
Instance parse_instance(const std::string& text);

nlohmann::json natural_to_json(const Natural& n);
Natural natural_from_json(const nlohmann::json& j);
nlohmann::json to_json(const Instance& inst);
nlohmann::json to_json(const SolutionSet& set);
nlohmann::json to_json(const FamilyWitness& w);
Instance instance_from_json(const nlohmann::json& j);
SolutionSet set_from_json(const nlohmann::json& j);

}  // namespace pillai::model

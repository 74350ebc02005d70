#pragma once

// Constructors for the known infinite classes of three-solution sets, a
// sweep over parameter boxes, and a recognizer mapping a triple back to a
// class.

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "pillai/model.hpp"

namespace pillai::families {

using model::Natural;
using model::SolutionSet;

enum class FamilyId { f62, f63, f64, f65, f66, f67, f68, f69, f10a };

std::string to_string(FamilyId id);
FamilyId parse_family_id(const std::string& text);
const std::vector<FamilyId>& all_families();

// Fields are read per family; the rest are ignored.
//   62:  a, d, k, u, v, half_k
//   63:  a, d, v
//   64:  g, v
//   65:  g, v
//   66:  a, x, upper
//   67:  a, x2, x3, t, w (w < 0 tries 0 then 1)
//   68:  a, m, u, v
//   69:  m1
//   10a: b, d, k, u, v
// For 62 with half_k set, k holds 2k (an odd number).
struct FamilyParams {
  FamilyId id = FamilyId::f62;
  Natural a = 0, b = 0;
  unsigned long d = 1, k = 1, g = 1, x = 1, x2 = 1, x3 = 2, m = 0;
  long m1 = 1;
  int u = 0, v = 0, t = 0, w = -1;
  bool upper = true;
  bool half_k = false;
};

std::string describe(const FamilyParams& p);

class InvalidParams : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

SolutionSet generate(const FamilyParams& params);

struct Generated10a {
  SolutionSet set;
  bool eq_a = false;  // s b^d - r = c
  bool eq_b = false;  // r a - s = c
};
Generated10a generate_10a(const FamilyParams& params);

struct ParamBox {
  // Bounds on the free integer parameters; `value_cap` drops sets whose
  // a, b, c, r or s exceeds it (0 means no cap).
  unsigned long a_max = 20;
  unsigned long exp_max = 6;
  Natural value_cap = 0;
};

struct SweepItem {
  FamilyParams params;
  SolutionSet set;
};

struct SweepResult {
  std::vector<SweepItem> items;
  std::map<std::string, std::size_t> skipped;
};

SweepResult sweep(FamilyId id, const ParamBox& box);

struct FamilyMatch {
  FamilyParams params;
  bool via_associate = false;
};

// Finds a class whose generated set lies in the same family as `triple` or
// its associate.
std::optional<FamilyMatch> matches_family(const SolutionSet& triple);

}  // namespace pillai::families

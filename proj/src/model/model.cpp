#include "pillai/model.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <set>
#include <sstream>

namespace pillai::model {

using arith::gcd;
using arith::pow;

void Instance::validate() const {
  if (a < 2) throw std::invalid_argument("instance: a must exceed 1");
  if (b < 2) throw std::invalid_argument("instance: b must exceed 1");
  if (c < 1) throw std::invalid_argument("instance: c must be positive");
  if (r < 1) throw std::invalid_argument("instance: r must be positive");
  if (s < 1) throw std::invalid_argument("instance: s must be positive");
}

std::strong_ordering Instance::operator<=>(const Instance& o) const {
  for (auto [l, rr] : {std::pair{&a, &o.a}, {&b, &o.b}, {&c, &o.c}, {&r, &o.r}, {&s, &o.s}}) {
    const int k = cmp(*l, *rr);
    if (k != 0) return k < 0 ? std::strong_ordering::less : std::strong_ordering::greater;
  }
  return std::strong_ordering::equal;
}

std::size_t SolutionSet::pair_count() const { return pairs().size(); }

std::vector<Pair> SolutionSet::pairs() const {
  std::vector<Pair> out;
  for (const auto& sol : solutions) out.emplace_back(sol.x, sol.y);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

bool evaluate(const Instance& inst, Exponent x, Exponent y, int u, int v) {
  const Integer left = inst.r * pow(inst.a, x);
  const Integer right = inst.s * pow(inst.b, y);
  return (u ? -left : left) + (v ? -right : right) == inst.c;
}

namespace {

std::optional<std::pair<int, int>> signs_from_values(const Integer& ra, const Integer& sb,
                                                     const Integer& c) {
  if (ra + sb == c) return std::pair{0, 0};
  if (ra - sb == c) return std::pair{0, 1};
  if (sb - ra == c) return std::pair{1, 0};
  return std::nullopt;
}

}  // namespace

std::optional<std::pair<int, int>> signs_for(const Instance& inst, Exponent x, Exponent y) {
  return signs_from_values(inst.r * pow(inst.a, x), inst.s * pow(inst.b, y), inst.c);
}

SolutionSet make_set(const Instance& inst, const std::vector<Pair>& pairs) {
  inst.validate();
  SolutionSet out{inst, {}};
  for (auto [x, y] : pairs) {
    auto sg = signs_for(inst, x, y);
    if (!sg) {
      throw std::invalid_argument("(" + std::to_string(x) + "," + std::to_string(y) +
                                  ") does not solve " + to_text(inst));
    }
    out.solutions.push_back({x, y, sg->first, sg->second});
  }
  std::sort(out.solutions.begin(), out.solutions.end());
  out.solutions.erase(std::unique(out.solutions.begin(), out.solutions.end()),
                      out.solutions.end());
  return out;
}

SolutionSet enumerate_solutions(const Instance& inst, Exponent x_max, Exponent y_max) {
  inst.validate();
  SolutionSet out{inst, {}};
  const Natural sb_max = inst.s * pow(inst.b, y_max);
  Natural ra = inst.r;
  for (Exponent x = 0; x <= x_max; ++x, ra *= inst.a) {
    // s b^y is one of c - r a^x, r a^x - c, c + r a^x.
    const Integer candidates[3] = {inst.c - ra, ra - inst.c, inst.c + ra};
    const int signs[3][2] = {{0, 0}, {0, 1}, {1, 0}};
    for (int i = 0; i < 3; ++i) {
      const Integer& t = candidates[i];
      if (t <= 0 || t > sb_max || !mpz_divisible_p(t.get_mpz_t(), inst.s.get_mpz_t())) continue;
      Natural q = t / inst.s;
      Natural rest;
      const Exponent y = mpz_remove(rest.get_mpz_t(), q.get_mpz_t(), inst.b.get_mpz_t());
      if (rest == 1 && y <= y_max) out.solutions.push_back({x, y, signs[i][0], signs[i][1]});
    }
    // Beyond this point r a^x - c only grows past every reachable s b^y.
    if (ra > inst.c && ra - inst.c > sb_max) break;
  }
  std::sort(out.solutions.begin(), out.solutions.end());
  return out;
}

namespace {

// Basic form plus, for each input solution, the index of its image.
struct Normalized {
  SolutionSet form;
  std::vector<Pair> images;
};

Normalized normalize(const SolutionSet& set) {
  if (set.solutions.empty()) throw BasicFormError("basic form: empty solution set");
  set.instance.validate();
  const auto ra = arith::minimal_root(set.instance.a);
  const auto rb = arith::minimal_root(set.instance.b);
  std::vector<Pair> scaled;
  for (const auto& sol : set.solutions) scaled.emplace_back(sol.x * ra.exponent, sol.y * rb.exponent);
  Exponent mx = scaled.front().first, my = scaled.front().second;
  for (auto [x, y] : scaled) {
    mx = std::min(mx, x);
    my = std::min(my, y);
  }
  Natural r = set.instance.r * pow(ra.base, mx);
  Natural s = set.instance.s * pow(rb.base, my);
  Natural c = set.instance.c;
  const Natural g = gcd(r, s);
  if (c % g != 0) throw BasicFormError("basic form: gcd(r, s) does not divide c");
  r /= g;
  s /= g;
  c /= g;
  if (gcd(r, s * rb.base) != 1) throw BasicFormError("basic form: gcd(r, s*b) != 1");
  if (gcd(s, r * ra.base) != 1) throw BasicFormError("basic form: gcd(s, r*a) != 1");
  Normalized out;
  for (auto& [x, y] : scaled) out.images.emplace_back(x - mx, y - my);
  out.form = make_set(Instance{ra.base, rb.base, c, r, s}, out.images);
  return out;
}

bool is_power_of(const Natural& base, const Natural& n) {
  Natural rest;
  mpz_remove(rest.get_mpz_t(), n.get_mpz_t(), base.get_mpz_t());
  return rest == 1;
}

}  // namespace

SolutionSet to_basic_form(const SolutionSet& set) { return normalize(set).form; }

bool is_basic_form(const SolutionSet& set) {
  try {
    return to_basic_form(set) == set;
  } catch (const BasicFormError&) {
    return false;
  }
}

SolutionSet associate(const SolutionSet& set) {
  const Instance& i = set.instance;
  SolutionSet out{Instance{i.b, i.a, i.c, i.s, i.r}, {}};
  for (const auto& sol : set.solutions) out.solutions.push_back({sol.y, sol.x, sol.v, sol.u});
  std::sort(out.solutions.begin(), out.solutions.end());
  return out;
}

bool is_subset_of(const SolutionSet& sub, const SolutionSet& super) {
  if (!(sub.instance == super.instance)) return false;
  const auto big = super.pairs();
  for (const auto& p : sub.pairs())
    if (!std::binary_search(big.begin(), big.end(), p)) return false;
  return true;
}

bool check_witness(const SolutionSet& s1, const SolutionSet& s2, const FamilyWitness& w) {
  const Instance &i1 = s1.instance, &i2 = s2.instance;
  if (w.k <= 0 || w.base_a < 2 || w.base_b < 2) return false;
  if (!is_power_of(w.base_a, i1.a) || !is_power_of(w.base_a, i2.a)) return false;
  if (!is_power_of(w.base_b, i1.b) || !is_power_of(w.base_b, i2.b)) return false;
  if (w.pairing.size() != s1.solutions.size() || s1.solutions.size() != s2.solutions.size())
    return false;
  if (mpq_class(i1.c) * w.k != mpq_class(i2.c)) return false;
  std::vector<bool> used(s2.solutions.size(), false);
  for (std::size_t i = 0; i < w.pairing.size(); ++i) {
    const std::size_t j = w.pairing[i];
    if (j >= used.size() || used[j]) return false;
    used[j] = true;
    const auto &p = s1.solutions[i], &q = s2.solutions[j];
    if (w.k * mpq_class(i1.r * pow(i1.a, p.x)) != mpq_class(i2.r * pow(i2.a, q.x))) return false;
    if (w.k * mpq_class(i1.s * pow(i1.b, p.y)) != mpq_class(i2.s * pow(i2.b, q.y))) return false;
  }
  return true;
}

std::optional<FamilyWitness> same_family(const SolutionSet& s1, const SolutionSet& s2) {
  if (s1.solutions.size() != s2.solutions.size()) return std::nullopt;
  Normalized n1, n2;
  try {
    n1 = normalize(s1);
    n2 = normalize(s2);
  } catch (const BasicFormError&) {
    return std::nullopt;
  }
  if (!(n1.form == n2.form)) return std::nullopt;
  FamilyWitness w;
  w.k = mpq_class(s2.instance.c, s1.instance.c);
  w.k.canonicalize();
  w.base_a = n1.form.instance.a;
  w.base_b = n1.form.instance.b;
  for (const auto& img : n1.images) {
    auto it = std::find(n2.images.begin(), n2.images.end(), img);
    if (it == n2.images.end()) return std::nullopt;
    w.pairing.push_back(static_cast<std::size_t>(it - n2.images.begin()));
  }
  if (!check_witness(s1, s2, w)) return std::nullopt;
  return w;
}

const std::vector<SolutionSet>& theorem1_rows() {
  static const std::vector<SolutionSet> rows = [] {
    const char* text[] = {
        "(3,2,1,1,2; 0,0,1,0,1,1,2,2)",
        "(3,2,5,1,2; 0,1,1,0,1,2,2,1,3,4)",
        "(3,2,7,1,2; 0,2,2,0,1,1,2,3)",
        "(5,2,3,1,2; 0,0,0,1,1,0,1,2,3,6)",
        "(5,3,2,1,1; 0,0,0,1,1,1,2,3)",
        "(7,2,5,3,2; 0,0,0,2,1,3,3,9)",
        "(6,2,8,1,7; 0,0,1,1,2,2,3,5)",
        "(2,2,3,1,1; 0,1,0,2,1,0,2,0)",
        "(2,2,4,3,1; 0,0,1,1,2,3,2,4)",
    };
    std::vector<SolutionSet> out;
    for (const char* t : text) out.push_back(parse_set(t));
    return out;
  }();
  return rows;
}

namespace {

struct CatalogEntry {
  int row;
  Via via;
  SolutionSet matched;
};

// Basic form text of every subset of every row and of its associate.
const std::map<std::string, CatalogEntry>& theorem1_catalog() {
  static const std::map<std::string, CatalogEntry> catalog = [] {
    std::map<std::string, CatalogEntry> out;
    const auto& rows = theorem1_rows();
    for (std::size_t ri = 0; ri < rows.size(); ++ri) {
      const auto pairs = rows[ri].pairs();
      for (unsigned mask = 1; mask < (1u << pairs.size()); ++mask) {
        std::vector<Pair> chosen;
        for (std::size_t i = 0; i < pairs.size(); ++i)
          if (mask & (1u << i)) chosen.push_back(pairs[i]);
        const SolutionSet sub = make_set(rows[ri].instance, chosen);
        for (Via via : {Via::direct, Via::associate}) {
          const SolutionSet cand = via == Via::direct ? sub : associate(sub);
          try {
            out.emplace(to_text(to_basic_form(cand)),
                        CatalogEntry{static_cast<int>(ri) + 1, via, cand});
          } catch (const BasicFormError&) {
          }
        }
      }
    }
    return out;
  }();
  return catalog;
}

}  // namespace

std::optional<Theorem1Match> matches_theorem1(const SolutionSet& set) {
  std::string key;
  try {
    key = to_text(to_basic_form(set));
  } catch (const BasicFormError&) {
    return std::nullopt;
  }
  const auto& catalog = theorem1_catalog();
  auto it = catalog.find(key);
  if (it == catalog.end()) return std::nullopt;
  auto w = same_family(set, it->second.matched);
  if (!w) return std::nullopt;
  return Theorem1Match{it->second.row, it->second.via, it->second.matched, *w};
}

GapDivisibility check_gap_divisibility(const SolutionSet& set, Exponent box_x, Exponent box_y) {
  GapDivisibility out;
  if (set.solutions.size() < 3) {
    out.reason = "fewer than three solutions";
    return out;
  }
  std::vector<Solution> sols = set.solutions;
  std::sort(sols.begin(), sols.end());
  const Solution s1 = sols[0], s2 = sols[1], s3 = sols[2];
  Exponent top = 0;
  for (const auto& sol : sols) top = std::max({top, sol.x, sol.y});
  out.box_x = box_x ? box_x : 4 * top + 8;
  out.box_y = box_y ? box_y : 4 * top + 8;

  if (!(s1.x < s2.x && s2.x < s3.x && s1.y < s2.y && s2.y < s3.y)) {
    out.failed_condition = 1;
    out.reason = "condition 1: exponents not strictly increasing in both coordinates";
    return out;
  }
  if (s1.u == s1.v) {
    out.failed_condition = 2;
    out.reason = "condition 2: u1 == v1";
    return out;
  }
  const Instance& in = set.instance;
  const Natural left = in.r * pow(in.a, s1.x), right = in.s * pow(in.b, s1.y);
  const Natural g = gcd(left, right);
  if (left / g <= 2 || right / g <= 2) {
    out.failed_condition = 4;
    out.reason = "condition 4: R or S is at most 2";
    return out;
  }
  for (const auto& sol : enumerate_solutions(in, out.box_x, out.box_y).solutions) {
    if (sol.x > s1.x && sol.y > s1.y && (sol.x < s2.x || sol.y < s2.y)) {
      out.failed_condition = 3;
      out.reason = "condition 3: solution (" + std::to_string(sol.x) + "," +
                   std::to_string(sol.y) + ") lies between the first two";
      return out;
    }
  }
  const bool ok = (s3.x - s1.x) % (s2.x - s1.x) == 0 && (s3.y - s1.y) % (s2.y - s1.y) == 0;
  out.kind = ok ? GapDivisibility::Kind::holds : GapDivisibility::Kind::violated;
  out.reason = ok ? "gaps divide" : "VIOLATION: hypotheses hold but a gap does not divide";
  return out;
}

std::string to_text(const Instance& inst) {
  std::ostringstream os;
  os << inst.a << "," << inst.b << "," << inst.c << "," << inst.r << "," << inst.s;
  return os.str();
}

std::string to_text(const SolutionSet& set) {
  std::ostringstream os;
  os << "(" << to_text(set.instance) << ";";
  bool first = true;
  for (const auto& sol : set.solutions) {
    os << (first ? " " : ",") << sol.x << "," << sol.y;
    first = false;
  }
  os << ")";
  return os.str();
}

namespace {

std::vector<std::string> split_commas(const std::string& text) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : text) {
    if (ch == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (!std::isspace(static_cast<unsigned char>(ch))) {
      cur.push_back(ch);
    }
  }
  out.push_back(cur);
  return out;
}

std::string strip_parens(std::string t) {
  auto not_space = [](unsigned char ch) { return !std::isspace(ch); };
  t.erase(t.begin(), std::find_if(t.begin(), t.end(), not_space));
  t.erase(std::find_if(t.rbegin(), t.rend(), not_space).base(), t.end());
  if (!t.empty() && t.front() == '(') t.erase(t.begin());
  if (!t.empty() && t.back() == ')') t.pop_back();
  return t;
}

}  // namespace

Instance parse_instance(const std::string& text) {
  const auto parts = split_commas(strip_parens(text));
  if (parts.size() != 5) throw std::invalid_argument("instance needs a,b,c,r,s: '" + text + "'");
  Instance inst{arith::parse_integer(parts[0]), arith::parse_integer(parts[1]),
                arith::parse_integer(parts[2]), arith::parse_integer(parts[3]),
                arith::parse_integer(parts[4])};
  inst.validate();
  return inst;
}

SolutionSet parse_set(const std::string& text) {
  const std::string body = strip_parens(text);
  const auto semi = body.find(';');
  if (semi == std::string::npos) throw std::invalid_argument("set needs ';': '" + text + "'");
  const Instance inst = parse_instance(body.substr(0, semi));
  const auto nums = split_commas(body.substr(semi + 1));
  if (nums.size() % 2 != 0) throw std::invalid_argument("odd exponent count in '" + text + "'");
  std::vector<Pair> pairs;
  for (std::size_t i = 0; i < nums.size(); i += 2) {
    const Integer x = arith::parse_integer(nums[i]), y = arith::parse_integer(nums[i + 1]);
    if (x < 0 || y < 0 || !x.fits_ulong_p() || !y.fits_ulong_p())
      throw std::invalid_argument("bad exponent in '" + text + "'");
    pairs.emplace_back(x.get_ui(), y.get_ui());
  }
  return make_set(inst, pairs);
}

nlohmann::json natural_to_json(const Natural& n) {
  if (n >= 0 && n.fits_ulong_p()) return n.get_ui();
  if (n.fits_slong_p()) return n.get_si();
  return n.get_str();
}

Natural natural_from_json(const nlohmann::json& j) {
  if (j.is_number_unsigned()) return Natural(j.get<unsigned long>());
  if (j.is_number_integer()) return Natural(j.get<long>());
  if (j.is_string()) return arith::parse_integer(j.get<std::string>());
  throw std::invalid_argument("expected an integer, got " + j.dump());
}

nlohmann::json to_json(const Instance& inst) {
  return {{"a", natural_to_json(inst.a)}, {"b", natural_to_json(inst.b)},
          {"c", natural_to_json(inst.c)}, {"r", natural_to_json(inst.r)},
          {"s", natural_to_json(inst.s)}};
}

nlohmann::json to_json(const SolutionSet& set) {
  nlohmann::json j = to_json(set.instance);
  j["solutions"] = nlohmann::json::array();
  for (const auto& sol : set.solutions)
    j["solutions"].push_back({{"x", sol.x}, {"y", sol.y}, {"u", sol.u}, {"v", sol.v}});
  return j;
}

nlohmann::json to_json(const FamilyWitness& w) {
  return {{"k", w.k.get_str()},
          {"base_a", natural_to_json(w.base_a)},
          {"base_b", natural_to_json(w.base_b)},
          {"pairing", w.pairing}};
}

Instance instance_from_json(const nlohmann::json& j) {
  Instance inst{natural_from_json(j.at("a")), natural_from_json(j.at("b")),
                natural_from_json(j.at("c")), natural_from_json(j.at("r")),
                natural_from_json(j.at("s"))};
  inst.validate();
  return inst;
}

SolutionSet set_from_json(const nlohmann::json& j) {
  SolutionSet set{instance_from_json(j), {}};
  for (const auto& e : j.at("solutions")) {
    Solution sol{e.at("x").get<Exponent>(), e.at("y").get<Exponent>(), e.at("u").get<int>(),
                 e.at("v").get<int>()};
    if ((sol.u != 0 && sol.u != 1) || (sol.v != 0 && sol.v != 1))
      throw std::invalid_argument("signs must be 0 or 1");
    if (!evaluate(set.instance, sol.x, sol.y, sol.u, sol.v))
      throw std::invalid_argument("solution record does not satisfy the equation");
    set.solutions.push_back(sol);
  }
  std::sort(set.solutions.begin(), set.solutions.end());
  return set;
}

}  // namespace pillai::model

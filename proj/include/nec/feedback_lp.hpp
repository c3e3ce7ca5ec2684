#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>
#include <json.hpp>

#include "nec/protocols.hpp"

namespace nec {

using Rational = boost::multiprecision::cpp_rational;
std::string rational_string(const Rational& r);  // "p/q", or "p" when integral

struct FeedbackLpInstance {
  std::vector<int64_t> sa_caps;  // s->A links
  std::vector<int64_t> bt_caps;  // B->t links
  int z = 0;
  int m = 0;
  int64_t cz = 0;
  std::vector<std::string> ids;  // link names, s->A first; generated when empty
  int64_t c1() const;
  int64_t total() const;
  static FeedbackLpInstance from_four_node(const FourNodeInstance& inst);
};

struct LpOptions {
  bool free_bt = false;        // B->t degrees become variables in [0, r] instead of fixed at r
  int max_double_budget = 12;  // guard on 2z
};

struct LpResult {
  Rational h;
  Rational objective;                    // sum of s->A degrees
  std::vector<Rational> f;               // every forward link, s->A first
  std::vector<std::string> binding;      // constraints tight at the optimum
  int constraints = 0;                   // after removing dominated duplicates
  int sa_links = 0;
  bool integral() const;
  // s->A degrees rounded down, for the encoder builder; `warning` is set when rounding changed anything.
  std::vector<int64_t> integral_degrees(std::string* warning = nullptr) const;
  nlohmann::ordered_json to_json() const;
};

// Maximizes the s->A degrees subject to the capacity bounds and both conditions; h = C1 - sum.
// Throws infeasible naming a violated constraint, guard-limit when 2z exceeds the configured budget.
LpResult min_feedback_capacity(const FeedbackLpInstance& inst, const LpOptions& opt = {});

// Brute-force check: best objective over degrees on the grid {0, 1/d, 2/d, ...} for each d up to
// `max_denominator` whose grid has at most `point_limit` points.
struct GridOptimum {
  int denominator = 1;
  Rational objective;
  std::vector<Rational> f;
};
std::vector<GridOptimum> grid_feedback_optimum(const FeedbackLpInstance& inst, int max_denominator = 8,
                                               int64_t point_limit = 2'000'000, const LpOptions& opt = {});

}  // namespace nec

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "nec/bounds.hpp"
#include "nec/fixtures.hpp"

namespace nec {

nlohmann::ordered_json witness_json(const BoundWitness& w);

// Every bound at budget z: minimum over cuts, plus the per-cut values on `drawn_cut` when it is non-empty.
// A bound that trips a guard is reported as {"error": ...}; `guard_hit` is set when that happens.
nlohmann::ordered_json bounds_report(const Network& net, int z, const std::vector<std::string>& drawn_cut,
                                     const BoundLimits& lim, bool* guard_hit = nullptr);

// Expected values of a fixture recomputed. Per-cut bounds use the drawn cut when one is recorded, the
// minimum over cuts otherwise; "lp_h" solves the feedback LP.
struct ExpectedCheck {
  std::string name;
  int64_t expected = 0;
  int64_t actual = 0;
  bool ok() const { return expected == actual; }
};
std::vector<ExpectedCheck> check_fixture(const Fixture& f, const BoundLimits& lim = {});

}  // namespace nec

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "nec/network.hpp"

namespace nec {

struct CorrectionStep {
  std::string node;
  int64_t flow_in = 0;   // max-flow source -> node on the remaining graph
  int64_t flow_out = 0;  // max-flow node -> sink on the remaining graph
  std::vector<std::vector<std::string>> in_paths, out_paths;  // unit paths as edge ids
  std::vector<int64_t> capacity_before;                       // remaining capacity per edge when selected
  int mds_length() const { return static_cast<int>(flow_in); }
  int mds_dimension() const { return static_cast<int>(flow_out); }
};

struct CorrectionPlan {
  std::vector<CorrectionStep> steps;
  std::vector<int64_t> remaining;  // per edge after the last step; -1 for UNBOUNDED
  nlohmann::ordered_json to_json(const Network& net) const;
};

// Selects the candidate with the largest flow surplus on the remaining graph, assigns a (flow_in, flow_out)
// MDS code on unit paths to and from it, removes the used capacity and repeats while some surplus is
// positive. Throws flow-order-violated naming a candidate whose inflow is below its outflow.
CorrectionPlan greedy_intermediate_ec(const Network& net, const std::vector<std::string>& candidates);

// Integral max-flow on explicit remaining capacities (-1 = UNBOUNDED) with unit-path decomposition,
// lexicographically smallest edge sequence first.
struct UnitFlow {
  int64_t value = 0;
  std::vector<std::vector<int>> paths;
};
UnitFlow unit_flow(const Network& net, const std::vector<int64_t>& capacity, int from, int to);

}  // namespace nec

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "nec/bounds.hpp"
#include "nec/network.hpp"

namespace nec {

// Non-overlapping zig-zag network with k layers. Nodes s = B0, B1..Bk on the source side and A1..Ak,
// t = A(k+1) on the sink side; forward bundle i runs B(i-1) -> Ai for i = 1..k+1, feedback bundle i runs
// Ai -> Bi for i = 1..k, and Ai -> A(i+1), Bi -> B(i+1) are unbounded.
struct ZigZagSpec {
  std::vector<std::vector<int64_t>> forward;  // k+1 bundles of link capacities
  std::vector<int> feedback;                  // k link counts
  int layers() const { return static_cast<int>(feedback.size()); }
  int64_t count(int i) const { return static_cast<int64_t>(forward.at(i - 1).size()); }  // b_i, 1-based
  int64_t count_between(int i, int j) const;  // b_(i+1) + ... + b_j
  int64_t bundle_capacity(int i) const;       // total capacity of forward bundle i
  void validate() const;                      // throws invalid-input
};

// "F=6,2,2,1,1/3,3,3,3,3/2,2,1,1,1,1,1,1;m=5,1"
ZigZagSpec parse_zigzag(const std::string& text);
std::string format_zigzag(const ZigZagSpec& spec);

// Feedback links of layer i get the capacity of forward bundle i. Only layers in `keep` (1-based) get
// feedback; all layers when `keep` is null.
Network zigzag_network(const ZigZagSpec& spec, const std::vector<int>* keep = nullptr);

struct ZigZagCandidate {
  std::vector<int> layers;
  std::vector<std::string> families;  // any of "P", "Q", "R"
  int64_t value = 0;
};

struct ZigZagResult {
  int64_t rate = 0;
  std::vector<int> best;  // first maximizer in candidate order
  int64_t full_bound = 0;
  bool certified_tight = false;
  std::string certificate;  // "all-later-bundles-wide" or "strong-feedback-layer-u"; empty when not certified
  std::vector<ZigZagCandidate> candidates;
  nlohmann::ordered_json to_json() const;
};

struct ZigZagOptions {
  int max_layers = 6;
  BoundLimits limits{};
};

// Largest reduced-network bound over the singleton, gap-separated and strong-first-layer index sets.
ZigZagResult zigzag_rate(const ZigZagSpec& spec, int z, const ZigZagOptions& opt = {});

}  // namespace nec

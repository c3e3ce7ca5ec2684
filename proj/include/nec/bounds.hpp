#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "nec/network.hpp"

namespace nec {

enum class BoundKind { TwoNode, Singleton, Bound1, Bound2, Generalized };
const char* bound_name(BoundKind k);

struct BoundWitness {
  std::vector<std::string> cut;              // source side of the minimizing cut
  std::vector<std::string> erased_forward;   // F
  std::vector<std::string> erased_feedback;  // W
  std::vector<std::string> singleton_set;    // S
  std::vector<std::string> z1, z2, w1, w2;
  int adversaries = 0;  // budget left after erasures
};

struct BoundResult {
  int64_t value = 0;
  BoundWitness witness;
};

struct BoundLimits {
  int cutsize = 24;  // |Q| + |Q^R|
  int nodes = 20;
};

// Sum of the p smallest entries.
int64_t smallest_sum(std::vector<int64_t> caps, int p);

BoundResult two_node_bound(const std::vector<int64_t>& forward_caps, int m, int z);
BoundResult two_node_bound(const Network& net, const Cut& cut, int z);

// Per-cut bounds; the cut must not be skippable.
BoundResult generalized_singleton(const Network& net, const Cut& cut, int z, const BoundLimits& lim = {});
BoundResult cutset_bound1(const Network& net, const Cut& cut, int z, const BoundLimits& lim = {});
// Explicit pair; throws inadmissible-witness when |Z_i u W_i| > z.
BoundResult cutset_bound2(const Network& net, const Cut& cut, int z, const std::vector<int>& z1,
                          const std::vector<int>& z2);
BoundResult cutset_bound2_opt(const Network& net, const Cut& cut, int z, const BoundLimits& lim = {});
BoundResult cut_generalized(const Network& net, const Cut& cut, int z, const BoundLimits& lim = {});

// Minimum of a per-cut bound over all non-skippable cuts.
BoundResult min_over_cuts(const Network& net, int z, BoundKind kind, const BoundLimits& lim = {});
BoundResult generalized_bound(const Network& net, int z, const BoundLimits& lim = {});

// Re-evaluates the defining formula on a witness; returns the value it certifies.
int64_t replay_witness(const Network& net, int z, BoundKind kind, const BoundWitness& w);

// Exhaustive Singleton over raw subsets (no symmetry reduction); test oracle for small cuts.
int64_t singleton_bruteforce(const Network& net, const Cut& cut, int z);

}  // namespace nec

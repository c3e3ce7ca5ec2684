#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace nec {

// Edge capacity in field symbols per round, or the UNBOUNDED sentinel.
class Capacity {
 public:
  static Capacity finite(int64_t v);
  static Capacity unbounded() { return Capacity(); }

  bool is_unbounded() const { return value_ < 0; }
  int64_t value() const;  // throws on UNBOUNDED
  bool operator==(const Capacity&) const = default;

 private:
  Capacity() = default;
  int64_t value_ = -1;
};

struct Edge {
  std::string id;
  std::string from;
  std::string to;
  Capacity cap = Capacity::unbounded();
};

// Order used for every id comparison: digit runs compare numerically, so l2 < l10.
bool natural_less(const std::string& a, const std::string& b);

class Network {
 public:
  // Validates and canonicalises (nodes and edges sorted by id).
  static Network build(std::vector<std::string> nodes, std::vector<Edge> edges, std::string source,
                       std::string sink);

  const std::vector<std::string>& nodes() const { return nodes_; }
  const std::vector<Edge>& edges() const { return edges_; }
  int num_nodes() const { return static_cast<int>(nodes_.size()); }
  int num_edges() const { return static_cast<int>(edges_.size()); }
  int source() const { return source_; }
  int sink() const { return sink_; }
  int tail(int e) const { return tails_[e]; }
  int head(int e) const { return heads_[e]; }
  const std::vector<int>& out_edges(int v) const { return out_[v]; }
  const std::vector<int>& in_edges(int v) const { return in_[v]; }
  int node_index(const std::string& id) const;  // throws unknown-node
  int edge_index(const std::string& id) const;  // throws unknown-edge
  const std::string& node_id(int v) const { return nodes_[v]; }
  const std::string& edge_id(int e) const { return edges_[e].id; }
  const Capacity& cap(int e) const { return edges_[e].cap; }

  // Copy with the given edges' capacities replaced (used by property tests).
  Network with_capacity(int e, Capacity c) const;

 private:
  std::vector<std::string> nodes_;
  std::vector<Edge> edges_;
  std::vector<int> tails_, heads_;
  std::vector<std::vector<int>> out_, in_;
  int source_ = 0, sink_ = 0;
};

// The cyclic two-node network: n forward links s->t and m feedback links t->s.
struct TwoNodeNetwork {
  std::vector<int64_t> forward_caps;
  std::vector<int64_t> feedback_caps;
  int z = 0;
  void validate() const;
};

Network parse_network(const std::string& text);
std::string serialize_network(const Network& net);  // canonical JSON

std::vector<int> topological_order(const Network& net);

// Node reachability, optionally ignoring erased edges.
class Reachability {
 public:
  explicit Reachability(const Network& net, const std::vector<bool>& erased = {});
  bool node_reaches(int u, int v) const { return reach_[u][v]; }  // reflexive
  // True iff a directed path starts with `upper` and ends with `lower`.
  bool is_downstream(int lower, int upper) const;

 private:
  const Network* net_;
  std::vector<std::vector<bool>> reach_;
};

struct Cut {
  std::vector<bool> source_side;  // indexed by node
  std::vector<int> forward;       // edges S -> S^c, ascending
  std::vector<int> feedback;      // edges S^c -> S, ascending
  bool skippable = false;         // some crossing edge is UNBOUNDED

  std::vector<std::string> source_side_ids(const Network& net) const;
};

Cut make_cut(const Network& net, const std::vector<bool>& source_side);
Cut cut_from_ids(const Network& net, const std::vector<std::string>& source_side);

// One cut per subset of intermediate nodes; bit j of the enumeration index selects the
// j-th intermediate node in id order.
std::vector<Cut> enumerate_cuts(const Network& net, int node_limit = 20);

// True iff a path from forward edge `fwd` to feedback edge `fb` uses no other crossing edge.
bool directly_downstream(const Network& net, const Cut& cut, int fb, int fwd,
                         const std::vector<bool>& erased = {});

int64_t forward_capacity(const Network& net, const Cut& cut);

// Minimum total forward capacity over cuts with finite forward capacity; nullopt if none.
std::optional<int64_t> min_cut_value(const Network& net, int node_limit = 20);
// Independent augmenting-path max-flow; nullopt if unbounded.
std::optional<int64_t> max_flow(const Network& net);
std::optional<int64_t> max_flow(const Network& net, int from, int to, const std::vector<bool>& erased = {});

}  // namespace nec

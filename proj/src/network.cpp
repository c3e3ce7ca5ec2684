#include "nec/network.hpp"

#include <algorithm>
#include <deque>
#include <limits>
#include <map>
#include <nlohmann/json.hpp>
#include <queue>
#include <set>

#include "nec/error.hpp"

namespace nec {

Capacity Capacity::finite(int64_t v) {
  if (v < 0) fail(ErrorKind::InvalidInput, "negative-capacity", std::to_string(v));
  Capacity c;
  c.value_ = v;
  return c;
}

int64_t Capacity::value() const {
  if (is_unbounded()) fail(ErrorKind::Invariant, "unbounded-capacity", "finite value requested");
  return value_;
}

bool natural_less(const std::string& a, const std::string& b) {
  size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    bool da = std::isdigit(static_cast<unsigned char>(a[i])), db = std::isdigit(static_cast<unsigned char>(b[j]));
    if (da && db) {
      size_t i2 = i, j2 = j;
      while (i2 < a.size() && std::isdigit(static_cast<unsigned char>(a[i2]))) ++i2;
      while (j2 < b.size() && std::isdigit(static_cast<unsigned char>(b[j2]))) ++j2;
      std::string na = a.substr(i, i2 - i), nb = b.substr(j, j2 - j);
      na.erase(0, std::min(na.find_first_not_of('0'), na.size()));
      nb.erase(0, std::min(nb.find_first_not_of('0'), nb.size()));
      if (na.size() != nb.size()) return na.size() < nb.size();
      if (na != nb) return na < nb;
      i = i2;
      j = j2;
    } else {
      if (a[i] != b[j]) return a[i] < b[j];
      ++i;
      ++j;
    }
  }
  if ((a.size() - i) != (b.size() - j)) return (a.size() - i) < (b.size() - j);
  return a < b;
}

Network Network::build(std::vector<std::string> nodes, std::vector<Edge> edges, std::string source,
                       std::string sink) {
  Network n;
  std::sort(nodes.begin(), nodes.end(), natural_less);
  for (size_t i = 1; i < nodes.size(); ++i)
    if (nodes[i] == nodes[i - 1]) fail(ErrorKind::InvalidInput, "duplicate-node-id", nodes[i]);
  std::sort(edges.begin(), edges.end(), [](const Edge& a, const Edge& b) { return natural_less(a.id, b.id); });
  for (size_t i = 1; i < edges.size(); ++i)
    if (edges[i].id == edges[i - 1].id) fail(ErrorKind::InvalidInput, "duplicate-edge-id", edges[i].id);
  n.nodes_ = std::move(nodes);
  n.edges_ = std::move(edges);
  n.out_.assign(n.nodes_.size(), {});
  n.in_.assign(n.nodes_.size(), {});
  for (size_t e = 0; e < n.edges_.size(); ++e) {
    int u = n.node_index(n.edges_[e].from), v = n.node_index(n.edges_[e].to);
    if (u == v) fail(ErrorKind::InvalidInput, "cycle-detected", "self-loop " + n.edges_[e].id);
    n.tails_.push_back(u);
    n.heads_.push_back(v);
    n.out_[u].push_back(static_cast<int>(e));
    n.in_[v].push_back(static_cast<int>(e));
  }
  n.source_ = n.node_index(source);
  n.sink_ = n.node_index(sink);
  if (n.source_ == n.sink_) fail(ErrorKind::InvalidInput, "source-is-sink", source);
  // Kahn's algorithm doubles as the cycle check.
  std::vector<int> indeg(n.nodes_.size());
  for (int v : n.heads_) ++indeg[v];
  std::vector<int> ready;
  for (size_t v = 0; v < indeg.size(); ++v)
    if (!indeg[v]) ready.push_back(static_cast<int>(v));
  size_t done = 0;
  while (!ready.empty()) {
    int v = ready.back();
    ready.pop_back();
    ++done;
    for (int e : n.out_[v])
      if (--indeg[n.heads_[e]] == 0) ready.push_back(n.heads_[e]);
  }
  if (done != n.nodes_.size()) fail(ErrorKind::InvalidInput, "cycle-detected", "graph is not acyclic");
  Reachability r(n);
  if (!r.node_reaches(n.source_, n.sink_)) fail(ErrorKind::InvalidInput, "sink-unreachable", sink);
  return n;
}

int Network::node_index(const std::string& id) const {
  auto it = std::lower_bound(nodes_.begin(), nodes_.end(), id, natural_less);
  if (it == nodes_.end() || *it != id) fail(ErrorKind::InvalidInput, "unknown-node", id);
  return static_cast<int>(it - nodes_.begin());
}

int Network::edge_index(const std::string& id) const {
  auto it = std::lower_bound(edges_.begin(), edges_.end(), id,
                             [](const Edge& e, const std::string& k) { return natural_less(e.id, k); });
  if (it == edges_.end() || it->id != id) fail(ErrorKind::InvalidInput, "unknown-edge", id);
  return static_cast<int>(it - edges_.begin());
}

Network Network::with_capacity(int e, Capacity c) const {
  Network copy = *this;
  copy.edges_[e].cap = c;
  return copy;
}

void TwoNodeNetwork::validate() const {
  if (forward_caps.empty()) fail(ErrorKind::InvalidInput, "empty-forward", "n must be at least 1");
  for (auto c : forward_caps)
    if (c <= 0) fail(ErrorKind::InvalidInput, "nonpositive-capacity", "forward capacity " + std::to_string(c));
  for (auto c : feedback_caps)
    if (c <= 0) fail(ErrorKind::InvalidInput, "nonpositive-capacity", "feedback capacity " + std::to_string(c));
  if (z < 0) fail(ErrorKind::InvalidInput, "negative-budget", std::to_string(z));
}

Network parse_network(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::InvalidInput, "malformed-json", e.what());
  }
  try {
    std::vector<std::string> nodes = j.at("nodes").get<std::vector<std::string>>();
    std::vector<Edge> edges;
    for (const auto& je : j.at("edges")) {
      Edge e;
      e.id = je.at("id").get<std::string>();
      e.from = je.at("from").get<std::string>();
      e.to = je.at("to").get<std::string>();
      const auto& c = je.at("cap");
      if (c.is_string()) {
        if (c.get<std::string>() != "unbounded") fail(ErrorKind::InvalidInput, "bad-capacity", c.dump());
        e.cap = Capacity::unbounded();
      } else if (c.is_number_integer()) {
        e.cap = Capacity::finite(c.get<int64_t>());
      } else {
        fail(ErrorKind::InvalidInput, "bad-capacity", c.dump());
      }
      edges.push_back(std::move(e));
    }
    return Network::build(std::move(nodes), std::move(edges), j.at("source").get<std::string>(),
                          j.at("sink").get<std::string>());
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::InvalidInput, "malformed-network", e.what());
  }
}

std::string serialize_network(const Network& net) {
  nlohmann::ordered_json j;
  j["nodes"] = net.nodes();
  j["edges"] = nlohmann::ordered_json::array();
  for (const auto& e : net.edges()) {
    nlohmann::ordered_json je;
    je["id"] = e.id;
    je["from"] = e.from;
    je["to"] = e.to;
    if (e.cap.is_unbounded())
      je["cap"] = "unbounded";
    else
      je["cap"] = e.cap.value();
    j["edges"].push_back(je);
  }
  j["source"] = net.node_id(net.source());
  j["sink"] = net.node_id(net.sink());
  return j.dump(2) + "\n";
}

std::vector<int> topological_order(const Network& net) {
  std::vector<int> indeg(net.num_nodes());
  for (int e = 0; e < net.num_edges(); ++e) ++indeg[net.head(e)];
  std::priority_queue<int, std::vector<int>, std::greater<int>> ready;
  for (int v = 0; v < net.num_nodes(); ++v)
    if (!indeg[v]) ready.push(v);
  std::vector<int> order;
  while (!ready.empty()) {
    int v = ready.top();
    ready.pop();
    order.push_back(v);
    for (int e : net.out_edges(v))
      if (--indeg[net.head(e)] == 0) ready.push(net.head(e));
  }
  return order;
}

Reachability::Reachability(const Network& net, const std::vector<bool>& erased) : net_(&net) {
  int n = net.num_nodes();
  reach_.assign(n, std::vector<bool>(n, false));
  for (int s = 0; s < n; ++s) {
    std::vector<int> stack{s};
    reach_[s][s] = true;
    while (!stack.empty()) {
      int v = stack.back();
      stack.pop_back();
      for (int e : net.out_edges(v)) {
        if (!erased.empty() && erased[e]) continue;
        int w = net.head(e);
        if (!reach_[s][w]) {
          reach_[s][w] = true;
          stack.push_back(w);
        }
      }
    }
  }
}

bool Reachability::is_downstream(int lower, int upper) const {
  if (lower == upper) return false;
  return reach_[net_->head(upper)][net_->tail(lower)];
}

std::vector<std::string> Cut::source_side_ids(const Network& net) const {
  std::vector<std::string> ids;
  for (int v = 0; v < net.num_nodes(); ++v)
    if (source_side[v]) ids.push_back(net.node_id(v));
  return ids;
}

Cut make_cut(const Network& net, const std::vector<bool>& source_side) {
  if (!source_side[net.source()] || source_side[net.sink()])
    fail(ErrorKind::InvalidInput, "bad-cut", "source side must contain source and exclude sink");
  Cut c;
  c.source_side = source_side;
  for (int e = 0; e < net.num_edges(); ++e) {
    bool t = source_side[net.tail(e)], h = source_side[net.head(e)];
    if (t && !h) c.forward.push_back(e);
    if (!t && h) c.feedback.push_back(e);
    if (t != h && net.cap(e).is_unbounded()) c.skippable = true;
  }
  return c;
}

Cut cut_from_ids(const Network& net, const std::vector<std::string>& source_side) {
  std::vector<bool> side(net.num_nodes(), false);
  for (const auto& id : source_side) side[net.node_index(id)] = true;
  return make_cut(net, side);
}

std::vector<Cut> enumerate_cuts(const Network& net, int node_limit) {
  if (net.num_nodes() > node_limit)
    fail(ErrorKind::GuardLimit, "node-count-limit", std::to_string(net.num_nodes()) + " nodes > limit " +
                                                        std::to_string(node_limit));
  std::vector<int> mid;
  for (int v = 0; v < net.num_nodes(); ++v)
    if (v != net.source() && v != net.sink()) mid.push_back(v);
  std::vector<Cut> cuts;
  uint64_t total = uint64_t{1} << mid.size();
  cuts.reserve(total);
  for (uint64_t mask = 0; mask < total; ++mask) {
    std::vector<bool> side(net.num_nodes(), false);
    side[net.source()] = true;
    for (size_t j = 0; j < mid.size(); ++j)
      if (mask >> j & 1) side[mid[j]] = true;
    cuts.push_back(make_cut(net, side));
  }
  return cuts;
}

bool directly_downstream(const Network& net, const Cut& cut, int fb, int fwd, const std::vector<bool>& erased) {
  // Off-cut edges from the head of fwd must stay on the sink side until fb.
  int start = net.head(fwd), goal = net.tail(fb);
  std::vector<bool> seen(net.num_nodes(), false);
  std::vector<int> stack{start};
  seen[start] = true;
  while (!stack.empty()) {
    int v = stack.back();
    stack.pop_back();
    if (v == goal) return true;
    for (int e : net.out_edges(v)) {
      if (!erased.empty() && erased[e]) continue;
      int w = net.head(e);
      if (cut.source_side[w]) continue;  // would cross the cut
      if (!seen[w]) {
        seen[w] = true;
        stack.push_back(w);
      }
    }
  }
  return false;
}

int64_t forward_capacity(const Network& net, const Cut& cut) {
  int64_t total = 0;
  for (int e : cut.forward) total += net.cap(e).value();
  return total;
}

std::optional<int64_t> min_cut_value(const Network& net, int node_limit) {
  std::optional<int64_t> best;
  for (const auto& c : enumerate_cuts(net, node_limit)) {
    bool finite = std::all_of(c.forward.begin(), c.forward.end(), [&](int e) { return !net.cap(e).is_unbounded(); });
    if (!finite) continue;
    int64_t v = forward_capacity(net, c);
    if (!best || v < *best) best = v;
  }
  return best;
}

std::optional<int64_t> max_flow(const Network& net) { return max_flow(net, net.source(), net.sink()); }

std::optional<int64_t> max_flow(const Network& net, int from, int to, const std::vector<bool>& erased) {
  // Edmonds-Karp on a residual matrix; UNBOUNDED edges get a capacity larger than any finite cut.
  int n = net.num_nodes();
  int64_t finite_total = 0;
  for (const auto& e : net.edges())
    if (!e.cap.is_unbounded()) finite_total += e.cap.value();
  const int64_t big = finite_total + 1;
  std::vector<std::vector<int64_t>> res(n, std::vector<int64_t>(n, 0));
  for (int e = 0; e < net.num_edges(); ++e) {
    if (!erased.empty() && erased[e]) continue;
    res[net.tail(e)][net.head(e)] += net.cap(e).is_unbounded() ? big : net.cap(e).value();
  }
  int64_t flow = 0;
  while (true) {
    std::vector<int> parent(n, -1);
    parent[from] = from;
    std::deque<int> q{from};
    while (!q.empty() && parent[to] < 0) {
      int v = q.front();
      q.pop_front();
      for (int w = 0; w < n; ++w)
        if (res[v][w] > 0 && parent[w] < 0) {
          parent[w] = v;
          q.push_back(w);
        }
    }
    if (parent[to] < 0) break;
    int64_t push = std::numeric_limits<int64_t>::max();
    for (int v = to; v != from; v = parent[v]) push = std::min(push, res[parent[v]][v]);
    for (int v = to; v != from; v = parent[v]) {
      res[parent[v]][v] -= push;
      res[v][parent[v]] += push;
    }
    flow += push;
    if (flow >= big) return std::nullopt;
  }
  return flow;
}

}  // namespace nec

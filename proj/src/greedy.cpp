#include "nec/greedy.hpp"

#include <algorithm>
#include <deque>
#include <limits>

#include "nec/error.hpp"

namespace nec {
namespace {

constexpr int64_t kHuge = std::numeric_limits<int64_t>::max() / 4;

std::vector<int64_t> full_capacity(const Network& net) {
  std::vector<int64_t> cap;
  for (int e = 0; e < net.num_edges(); ++e) cap.push_back(net.cap(e).is_unbounded() ? -1 : net.cap(e).value());
  return cap;
}

}  // namespace

UnitFlow unit_flow(const Network& net, const std::vector<int64_t>& capacity, int from, int to) {
  const int m = net.num_edges();
  std::vector<int64_t> cap(m), flow(m, 0);
  for (int e = 0; e < m; ++e) cap[e] = capacity[e] < 0 ? kHuge : capacity[e];
  UnitFlow out;
  if (from == to) return out;
  // Edmonds-Karp; residual arcs are (edge, forward?) pairs scanned in edge order.
  while (true) {
    std::vector<int> via(net.num_nodes(), -1);
    std::vector<bool> forward(net.num_nodes(), true), seen(net.num_nodes(), false);
    std::deque<int> queue{from};
    seen[from] = true;
    while (!queue.empty() && !seen[to]) {
      const int v = queue.front();
      queue.pop_front();
      for (int e : net.out_edges(v))
        if (!seen[net.head(e)] && flow[e] < cap[e]) {
          seen[net.head(e)] = true;
          via[net.head(e)] = e;
          forward[net.head(e)] = true;
          queue.push_back(net.head(e));
        }
      for (int e : net.in_edges(v))
        if (!seen[net.tail(e)] && flow[e] > 0) {
          seen[net.tail(e)] = true;
          via[net.tail(e)] = e;
          forward[net.tail(e)] = false;
          queue.push_back(net.tail(e));
        }
    }
    if (!seen[to]) break;
    int64_t push = kHuge;
    for (int v = to; v != from;) {
      const int e = via[v];
      push = std::min(push, forward[v] ? cap[e] - flow[e] : flow[e]);
      v = forward[v] ? net.tail(e) : net.head(e);
    }
    for (int v = to; v != from;) {
      const int e = via[v];
      flow[e] += forward[v] ? push : -push;
      v = forward[v] ? net.tail(e) : net.head(e);
    }
    out.value += push;
    if (out.value >= kHuge) fail(ErrorKind::Precondition, "unbounded-flow", net.node_id(from) + " -> " + net.node_id(to));
  }
  // Peel unit paths, always following the smallest flow-carrying edge.
  for (int64_t u = 0; u < out.value; ++u) {
    std::vector<int> path;
    for (int v = from; v != to;) {
      int next = -1;
      for (int e : net.out_edges(v))
        if (flow[e] > 0) {
          next = e;
          break;
        }
      ensure(next >= 0, "flow decomposition stuck at " + net.node_id(v));
      --flow[next];
      path.push_back(next);
      v = net.head(next);
    }
    out.paths.push_back(std::move(path));
  }
  return out;
}

CorrectionPlan greedy_intermediate_ec(const Network& net, const std::vector<std::string>& candidates) {
  std::vector<int> pending;
  for (const auto& id : candidates) pending.push_back(net.node_index(id));
  std::sort(pending.begin(), pending.end(),
            [&](int a, int b) { return natural_less(net.node_id(a), net.node_id(b)); });
  pending.erase(std::unique(pending.begin(), pending.end()), pending.end());

  std::vector<int64_t> remaining = full_capacity(net);
  const int s = net.source(), t = net.sink();
  for (int v : pending) {
    if (v == s || v == t) fail(ErrorKind::InvalidInput, "invalid-candidate", net.node_id(v) + " is the source or sink");
    const int64_t in = unit_flow(net, remaining, s, v).value, out = unit_flow(net, remaining, v, t).value;
    if (in < out)
      fail(ErrorKind::Precondition, "flow-order-violated",
           net.node_id(v) + ": inflow " + std::to_string(in) + " < outflow " + std::to_string(out));
  }

  CorrectionPlan plan;
  while (!pending.empty()) {
    int best = -1;
    int64_t best_surplus = 0;
    for (int v : pending) {
      const int64_t d = unit_flow(net, remaining, s, v).value - unit_flow(net, remaining, v, t).value;
      if (best < 0 || d > best_surplus) {
        best = v;
        best_surplus = d;
      }
    }
    if (best_surplus <= 0) break;
    const UnitFlow in = unit_flow(net, remaining, s, best);
    const UnitFlow out = unit_flow(net, remaining, best, t);
    CorrectionStep step;
    step.node = net.node_id(best);
    step.flow_in = in.value;
    step.flow_out = out.value;
    step.capacity_before = remaining;
    auto take = [&](const std::vector<std::vector<int>>& paths, std::vector<std::vector<std::string>>& ids) {
      for (const auto& p : paths) {
        std::vector<std::string> named;
        for (int e : p) {
          named.push_back(net.edge_id(e));
          if (remaining[e] >= 0) {
            ensure(remaining[e] > 0, "path over exhausted edge " + net.edge_id(e));
            --remaining[e];
          }
        }
        ids.push_back(std::move(named));
      }
    };
    take(in.paths, step.in_paths);
    take(out.paths, step.out_paths);
    plan.steps.push_back(std::move(step));
    pending.erase(std::find(pending.begin(), pending.end(), best));
  }
  plan.remaining = remaining;
  return plan;
}

nlohmann::ordered_json CorrectionPlan::to_json(const Network& net) const {
  nlohmann::ordered_json j;
  j["steps"] = nlohmann::ordered_json::array();
  for (const auto& s : steps) {
    nlohmann::ordered_json st;
    st["node"] = s.node;
    st["flow_in"] = s.flow_in;
    st["flow_out"] = s.flow_out;
    st["mds"] = {s.mds_length(), s.mds_dimension()};
    st["in_paths"] = s.in_paths;
    st["out_paths"] = s.out_paths;
    j["steps"].push_back(st);
  }
  nlohmann::ordered_json rem = nlohmann::ordered_json::object();
  for (int e = 0; e < net.num_edges(); ++e)
    rem[net.edge_id(e)] = remaining[e] < 0 ? nlohmann::ordered_json("unbounded") : nlohmann::ordered_json(remaining[e]);
  j["remaining"] = rem;
  return j;
}

}  // namespace nec

#include <gtest/gtest.h>

#include <random>

#include "nec/error.hpp"
#include "nec/fixtures.hpp"
#include "nec/network.hpp"

using namespace nec;

namespace {

ErrorKind kind_of(const std::string& text, std::string* code) {
  try {
    parse_network(text);
  } catch (const Error& e) {
    *code = e.code();
    return e.kind();
  }
  *code = "";
  return ErrorKind::Invariant;
}

bool respects(const Network& net, const std::vector<int>& order) {
  std::vector<int> pos(net.num_nodes());
  for (size_t i = 0; i < order.size(); ++i) pos[order[i]] = static_cast<int>(i);
  for (int e = 0; e < net.num_edges(); ++e)
    if (pos[net.tail(e)] >= pos[net.head(e)]) return false;
  return true;
}

// Plain DFS over edges, used as an oracle for Reachability.
bool path_exists(const Network& net, int from_node, int to_node) {
  std::vector<bool> seen(net.num_nodes());
  std::vector<int> stack{from_node};
  while (!stack.empty()) {
    int v = stack.back();
    stack.pop_back();
    if (v == to_node) return true;
    if (seen[v]) continue;
    seen[v] = true;
    for (int e : net.out_edges(v)) stack.push_back(net.head(e));
  }
  return false;
}

}  // namespace

TEST(Network, ParsesMinimalFile) {
  auto net = parse_network(R"({"nodes":["s","t"],"edges":[{"id":"e","from":"s","to":"t","cap":3}],"source":"s","sink":"t"})");
  EXPECT_EQ(net.num_edges(), 1);
  EXPECT_EQ(net.cap(0).value(), 3);
  EXPECT_EQ(topological_order(net), (std::vector<int>{net.node_index("s"), net.node_index("t")}));
}

TEST(Network, RejectsBadFiles) {
  std::string code;
  kind_of(R"({"nodes":["s","A","t"],"edges":[{"id":"a","from":"s","to":"A","cap":1},{"id":"b","from":"A","to":"s","cap":1},{"id":"c","from":"A","to":"t","cap":1}],"source":"s","sink":"t"})", &code);
  EXPECT_EQ(code, "cycle-detected");
  kind_of(R"({"nodes":["s","t"],"edges":[{"id":"a","from":"s","to":"t","cap":1},{"id":"a","from":"s","to":"t","cap":1}],"source":"s","sink":"t"})", &code);
  EXPECT_EQ(code, "duplicate-edge-id");
  kind_of(R"({"nodes":["s","t"],"edges":[{"id":"a","from":"s","to":"X","cap":1}],"source":"s","sink":"t"})", &code);
  EXPECT_EQ(code, "unknown-node");
  kind_of(R"({"nodes":["s","t"],"edges":[{"id":"a","from":"s","to":"t","cap":-1}],"source":"s","sink":"t"})", &code);
  EXPECT_EQ(code, "negative-capacity");
  kind_of(R"({"nodes":["s","A","t"],"edges":[{"id":"a","from":"s","to":"A","cap":1}],"source":"s","sink":"t"})", &code);
  EXPECT_EQ(code, "sink-unreachable");
  EXPECT_EQ(kind_of("{not json", &code), ErrorKind::InvalidInput);
}

TEST(Network, Fig11HasElevenEdgesAndFixedOrder) {
  const auto& net = fixture("fig11").network;
  EXPECT_EQ(net.num_edges(), 11);
  std::vector<std::string> names;
  for (int v : topological_order(net)) names.push_back(net.node_id(v));
  EXPECT_EQ(names, (std::vector<std::string>{"s", "A", "B", "t"}));
}

TEST(Network, TopologicalOrderRespectsEdgesOnAllFixtures) {
  for (const auto& f : all_fixtures()) EXPECT_TRUE(respects(f.network, topological_order(f.network))) << f.id;
}

TEST(Network, Fig6OrderConstraints) {
  const auto& net = fixture("fig6").network;
  auto order = topological_order(net);
  std::vector<int> pos(net.num_nodes());
  for (size_t i = 0; i < order.size(); ++i) pos[order[i]] = static_cast<int>(i);
  auto before = [&](const char* a, const char* b) { return pos[net.node_index(a)] < pos[net.node_index(b)]; };
  EXPECT_TRUE(before("s", "A") && before("s", "B") && before("A", "C") && before("B", "C") &&
              before("B", "D") && before("C", "D") && before("C", "t") && before("D", "t"));
}

TEST(Network, CanonicalRoundTrip) {
  for (const auto& f : all_fixtures()) {
    std::string once = serialize_network(f.network);
    std::string twice = serialize_network(parse_network(once));
    EXPECT_EQ(once, twice) << f.id;
  }
}

TEST(Network, NaturalOrder) {
  EXPECT_TRUE(natural_less("l2", "l10"));
  EXPECT_FALSE(natural_less("l10", "l2"));
  EXPECT_TRUE(natural_less("A", "s"));
}

TEST(Reachability, MatchesPathSearchAndIsIrreflexiveOnEdges) {
  for (const auto& f : all_fixtures()) {
    const auto& net = f.network;
    Reachability r(net);
    for (int a = 0; a < net.num_edges(); ++a) {
      EXPECT_FALSE(r.is_downstream(a, a));
      for (int b = 0; b < net.num_edges(); ++b) {
        if (a == b) continue;
        bool oracle = path_exists(net, net.head(b), net.tail(a));
        EXPECT_EQ(r.is_downstream(a, b), oracle) << f.id;
        if (r.is_downstream(a, b)) EXPECT_FALSE(r.is_downstream(b, a));
      }
    }
  }
}

TEST(Reachability, Fig4BottomLinksDownstreamOfTopLinks) {
  const auto& net = fixture("fig4").network;
  Reachability r(net);
  for (int e = 0; e < net.num_edges(); ++e)
    for (int g = 0; g < net.num_edges(); ++g)
      if (net.node_id(net.tail(g)) == "s" && net.node_id(net.head(g)) == "A" &&
          net.node_id(net.tail(e)) == "B" && net.node_id(net.head(e)) == "t")
        EXPECT_TRUE(r.is_downstream(e, g));
}

TEST(Reachability, Fig6FeedbackDirectlyDownstreamOfMiddleLayer) {
  const auto& net = fixture("fig6").network;
  Cut cut = cut_from_ids(net, {"s", "B", "D"});
  int l6 = net.edge_index("l6");
  int hits = 0;
  for (int e : cut.forward)
    if (net.node_id(net.tail(e)) == "B" && net.node_id(net.head(e)) == "C") {
      EXPECT_TRUE(directly_downstream(net, cut, l6, e));
      ++hits;
    }
  EXPECT_EQ(hits, 5);
  // s->A reaches l6 through the reliable A->C link, which stays on the sink side.
  EXPECT_TRUE(directly_downstream(net, cut, l6, net.edge_index("l1")));
  // Nothing below B->C leads back to A->B.
  EXPECT_FALSE(directly_downstream(net, cut, net.edge_index("w1"), net.edge_index("l2")));
}

TEST(Cuts, CountsFollowSubsetFormula) {
  auto two = parse_network(R"({"nodes":["s","t"],"edges":[{"id":"e","from":"s","to":"t","cap":5}],"source":"s","sink":"t"})");
  EXPECT_EQ(enumerate_cuts(two).size(), 1u);
  EXPECT_EQ(enumerate_cuts(fixture("fig11").network).size(), 4u);
  EXPECT_EQ(enumerate_cuts(fixture("fig9").network).size(), 1024u);
  EXPECT_THROW(enumerate_cuts(fixture("fig9").network, 11), Error);
  EXPECT_EQ(min_cut_value(two).value(), 5);
}

TEST(Cuts, Fig4OnlyOneCutIsFinite) {
  const auto& net = fixture("fig4").network;
  int usable = 0;
  for (const auto& c : enumerate_cuts(net)) {
    if (c.skippable) continue;
    ++usable;
    EXPECT_EQ(c.source_side_ids(net), (std::vector<std::string>{"B", "s"}));
  }
  EXPECT_EQ(usable, 1);
}

TEST(MinCut, Fig6Is37) { EXPECT_EQ(min_cut_value(fixture("fig6").network).value(), 37); }

TEST(MinCut, AgreesWithMaxFlowOnFixturesAndRandomNetworks) {
  for (const auto& f : all_fixtures()) EXPECT_EQ(min_cut_value(f.network), max_flow(f.network)) << f.id;
  for (uint64_t seed = 0; seed < 200; ++seed) {
    Network net = random_network(seed, 8, 5);
    EXPECT_EQ(min_cut_value(net), max_flow(net)) << seed;
  }
}

#include <gtest/gtest.h>

#include <map>

#include "nec/error.hpp"
#include "nec/fixtures.hpp"
#include "nec/greedy.hpp"

using namespace nec;

TEST(Greedy, Fig9SelectsBothCorrectingNodes) {
  const Network& net = fixture("fig9").network;
  const CorrectionPlan plan = greedy_intermediate_ec(net, {"Y4", "Y3"});
  ASSERT_EQ(plan.steps.size(), 2u);
  EXPECT_EQ(plan.steps[0].node, "Y3");
  EXPECT_EQ(plan.steps[1].node, "Y4");
  for (const auto& s : plan.steps) {
    EXPECT_EQ(s.mds_length(), 4);
    EXPECT_EQ(s.mds_dimension(), 2);
    EXPECT_EQ(s.in_paths.size(), 4u);
    EXPECT_EQ(s.out_paths.size(), 2u);
  }
}

TEST(Greedy, SubgraphsShareNoCapacityUnit) {
  const Network& net = fixture("fig9").network;
  const CorrectionPlan plan = greedy_intermediate_ec(net, {"Y3", "Y4"});
  std::map<std::string, int64_t> used;
  for (const auto& s : plan.steps) {
    for (const auto& p : s.in_paths)
      for (const auto& e : p) ++used[e];
    for (const auto& p : s.out_paths)
      for (const auto& e : p) ++used[e];
  }
  for (const auto& [e, n] : used) {
    const int idx = net.edge_index(e);
    EXPECT_LE(n, net.cap(idx).value()) << e;
    EXPECT_EQ(plan.remaining[idx], net.cap(idx).value() - n) << e;
  }
  // The unit-capacity links into the two nodes are used by exactly one of them.
  for (int x = 1; x <= 4; ++x) {
    EXPECT_EQ(used["x" + std::to_string(x) + "y3"], 1);
    EXPECT_EQ(used["x" + std::to_string(x) + "y4"], 1);
  }
}

TEST(Greedy, PathsAreContiguous) {
  const Network& net = fixture("fig9").network;
  const CorrectionPlan plan = greedy_intermediate_ec(net, {"Y3", "Y4"});
  for (const auto& s : plan.steps) {
    const int node = net.node_index(s.node);
    for (const auto& p : s.in_paths) {
      EXPECT_EQ(net.tail(net.edge_index(p.front())), net.source());
      EXPECT_EQ(net.head(net.edge_index(p.back())), node);
      for (size_t i = 1; i < p.size(); ++i)
        EXPECT_EQ(net.head(net.edge_index(p[i - 1])), net.tail(net.edge_index(p[i])));
    }
    for (const auto& p : s.out_paths) {
      EXPECT_EQ(net.tail(net.edge_index(p.front())), node);
      EXPECT_EQ(net.head(net.edge_index(p.back())), net.sink());
    }
  }
}

TEST(Greedy, NodesWithoutSurplusAreSkipped) {
  // Y1 receives 2 and forwards 2: no surplus, nothing to correct there.
  const CorrectionPlan plan = greedy_intermediate_ec(fixture("fig9").network, {"Y1"});
  EXPECT_TRUE(plan.steps.empty());
}

TEST(Greedy, RejectsBadCandidates) {
  const Network& net = fixture("fig9").network;
  EXPECT_THROW(greedy_intermediate_ec(net, {"s"}), Error);
  EXPECT_THROW(greedy_intermediate_ec(net, {"nope"}), Error);
  // fig4's A receives 2 but reaches t over an unbounded link.
  try {
    greedy_intermediate_ec(fixture("fig4").network, {"A"});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Precondition);
  }
}

TEST(UnitFlow, MatchesMaxFlowOnRandomNetworks) {
  for (uint64_t seed = 0; seed < 40; ++seed) {
    const Network net = random_network(seed, 7, 4);
    std::vector<int64_t> cap;
    for (int e = 0; e < net.num_edges(); ++e) cap.push_back(net.cap(e).value());
    const UnitFlow f = unit_flow(net, cap, net.source(), net.sink());
    EXPECT_EQ(f.value, max_flow(net).value()) << seed;
    EXPECT_EQ(static_cast<int64_t>(f.paths.size()), f.value);
    std::vector<int64_t> use(net.num_edges(), 0);
    for (const auto& p : f.paths)
      for (int e : p) ++use[e];
    for (int e = 0; e < net.num_edges(); ++e) EXPECT_LE(use[e], cap[e]);
  }
}

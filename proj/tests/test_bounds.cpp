#include <gtest/gtest.h>

#include "nec/bounds.hpp"
#include "nec/error.hpp"
#include "nec/fixtures.hpp"

using namespace nec;

namespace {

Cut drawn(const Fixture& f) { return cut_from_ids(f.network, f.drawn_cut); }

std::vector<int> ids(const Network& net, std::initializer_list<const char*> names) {
  std::vector<int> out;
  for (auto n : names) out.push_back(net.edge_index(n));
  return out;
}

}  // namespace

TEST(TwoNode, Formula) {
  EXPECT_EQ(two_node_bound({1, 1, 10, 10, 10, 10}, 3, 2).value, 22);
  EXPECT_EQ(two_node_bound({1, 1}, 0, 1).value, 0);
  EXPECT_EQ(two_node_bound({1, 2, 3, 4}, 0, 1).value, 3);
  EXPECT_EQ(two_node_bound({1, 2, 3, 4}, 1, 1).value, 6);
  EXPECT_EQ(smallest_sum({5, 1, 3}, 2), 4);
}

TEST(Singleton, FixtureValues) {
  EXPECT_EQ(generalized_singleton(fixture("fig4").network, drawn(fixture("fig4")), 2).value, 2);
  EXPECT_EQ(generalized_singleton(fixture("fig5a").network, drawn(fixture("fig5a")), 2).value, 20);
  EXPECT_EQ(generalized_singleton(fixture("fig5b").network, drawn(fixture("fig5b")), 2).value, 16);
  EXPECT_EQ(generalized_singleton(fixture("fig6").network, drawn(fixture("fig6")), 4).value, 27);
}

TEST(Singleton, ZeroBudgetIsForwardCapacity) {
  for (const auto& f : all_fixtures())
    for (const auto& c : enumerate_cuts(f.network)) {
      if (c.skippable) continue;
      EXPECT_EQ(generalized_singleton(f.network, c, 0).value, forward_capacity(f.network, c)) << f.id;
    }
}

TEST(Singleton, MatchesRawSubsetEnumeration) {
  for (const auto& f : all_fixtures())
    for (const auto& c : enumerate_cuts(f.network)) {
      if (c.skippable || c.forward.size() > 18) continue;
      for (int z = 0; z <= 2; ++z)
        EXPECT_EQ(generalized_singleton(f.network, c, z).value, singleton_bruteforce(f.network, c, z)) << f.id;
    }
  for (uint64_t seed = 0; seed < 60; ++seed) {
    Network net = random_network(seed, 6, 5);
    for (const auto& c : enumerate_cuts(net))
      for (int z = 0; z <= 2; ++z)
        EXPECT_EQ(generalized_singleton(net, c, z).value, singleton_bruteforce(net, c, z)) << seed;
  }
}

TEST(Bound1, FixtureValues) {
  EXPECT_EQ(cutset_bound1(fixture("fig5a").network, drawn(fixture("fig5a")), 2).value, 4);
  EXPECT_EQ(cutset_bound1(fixture("fig5b").network, drawn(fixture("fig5b")), 2).value, 15);
  EXPECT_EQ(cutset_bound1(fixture("fig6").network, drawn(fixture("fig6")), 4).value, 19);
  EXPECT_EQ(cutset_bound1(fixture("fig7").network, drawn(fixture("fig7")), 3).value, 9);
}

TEST(Bound2, ExplicitFig7Pair) {
  const auto& f = fixture("fig7");
  auto r = cutset_bound2(f.network, drawn(f), 3, ids(f.network, {"l1", "l2"}), ids(f.network, {"l6", "l7", "l8"}));
  EXPECT_EQ(r.value, 8);
  EXPECT_EQ(r.witness.w1, (std::vector<std::string>{"l5"}));
  EXPECT_TRUE(r.witness.w2.empty());
  EXPECT_THROW(cutset_bound2(f.network, drawn(f), 3, ids(f.network, {"l1", "l2", "l3"}), {}), Error);
}

TEST(Bound2, EmptyPairIsForwardCapacity) {
  const auto& f = fixture("fig7");
  EXPECT_EQ(cutset_bound2(f.network, drawn(f), 3, {}, {}).value, 18);
}

TEST(Bound2, Fig7OptimumIs8) {
  const auto& f = fixture("fig7");
  EXPECT_EQ(cutset_bound2_opt(f.network, drawn(f), 3).value, 8);
}

TEST(Generalized, FixtureValues) {
  EXPECT_EQ(generalized_bound(fixture("fig8").network, 1).value, 2);
  EXPECT_EQ(generalized_bound(fixture("fig9").network, 1).value, 8);
  EXPECT_EQ(generalized_bound(fixture("fig10").network, 1).value, 4);
  EXPECT_EQ(generalized_bound(fixture("fig11").network, 2).value, 7);
  EXPECT_EQ(generalized_bound(fixture("fig14a").network, 2).value, 6);
  EXPECT_EQ(generalized_bound(fixture("fig14b").network, 3).value, 9);
}

TEST(Generalized, ZeroBudgetIsMinCut) {
  for (const auto& f : all_fixtures()) {
    auto mc = min_cut_value(f.network);
    ASSERT_TRUE(mc.has_value());
    EXPECT_EQ(generalized_bound(f.network, 0).value, *mc) << f.id;
    EXPECT_EQ(min_over_cuts(f.network, 0, BoundKind::Singleton).value, *mc) << f.id;
    BoundLimits wide;
    wide.cutsize = 40;
    EXPECT_EQ(min_over_cuts(f.network, 0, BoundKind::Bound1, wide).value, *mc) << f.id;
    EXPECT_EQ(min_over_cuts(f.network, 0, BoundKind::Bound2).value, *mc) << f.id;
  }
}

TEST(Witness, ReplayReproducesValue) {
  for (const auto& f : all_fixtures()) {
    for (auto kind : {BoundKind::TwoNode, BoundKind::Singleton, BoundKind::Bound1, BoundKind::Bound2,
                      BoundKind::Generalized}) {
      BoundLimits lim;
      lim.cutsize = 40;
      auto r = min_over_cuts(f.network, f.z, kind, lim);
      EXPECT_EQ(replay_witness(f.network, f.z, kind, r.witness), r.value) << f.id << " " << bound_name(kind);
    }
  }
}

TEST(Guard, CutSizeLimitFailsLoudly) {
  const auto& f = fixture("fig6");
  BoundLimits lim;
  lim.cutsize = 10;
  EXPECT_THROW(cutset_bound1(f.network, drawn(f), 4, lim), Error);
}

TEST(Dominance, ChainAndBudgetMonotonicityOnRandomNetworks) {
  const BoundLimits lim{32, 20};
  for (uint64_t seed = 200; seed < 230; ++seed) {
    const Network net = random_network(seed, 7, 5);
    int64_t prev_gen = INT64_MAX, prev_sg = INT64_MAX;
    for (int z = 0; z <= 2; ++z) {
      const int64_t sg = min_over_cuts(net, z, BoundKind::Singleton, lim).value;
      const int64_t b1 = min_over_cuts(net, z, BoundKind::Bound1, lim).value;
      const int64_t b2 = min_over_cuts(net, z, BoundKind::Bound2, lim).value;
      const int64_t gen = generalized_bound(net, z, lim).value;
      EXPECT_LE(gen, b2) << seed;
      EXPECT_LE(gen, b1) << seed;
      EXPECT_LE(b1, sg) << seed;
      EXPECT_LE(b2, sg) << seed;
      EXPECT_LE(sg, min_cut_value(net).value()) << seed;
      EXPECT_LE(gen, prev_gen) << seed;
      EXPECT_LE(sg, prev_sg) << seed;
      prev_gen = gen;
      prev_sg = sg;
    }
  }
}

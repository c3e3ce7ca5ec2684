#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "nec/bounds.hpp"
#include "nec/error.hpp"
#include "nec/fixtures.hpp"
#include "nec/protocols.hpp"
#include "nec/zigzag.hpp"

using namespace nec;

TEST(ZigZag, ParseAndFormatRoundTrip) {
  const std::string text = "F=6,2,2,1,1/3,3,3,3,3/2,2,1,1,1,1,1,1;m=5,1";
  const ZigZagSpec spec = parse_zigzag(text);
  EXPECT_EQ(spec.layers(), 2);
  EXPECT_EQ(spec.count(2), 5);
  EXPECT_EQ(spec.count_between(1, 3), 13);
  EXPECT_EQ(spec.bundle_capacity(1), 12);
  EXPECT_EQ(format_zigzag(spec), text);
  EXPECT_THROW(parse_zigzag("F=1,1;m=1"), Error);
  EXPECT_THROW(parse_zigzag("F=1/1;m=x"), Error);
  EXPECT_THROW(parse_zigzag("F=1/0;m=1"), Error);
}

TEST(ZigZag, NetworkShape) {
  const ZigZagSpec spec = parse_zigzag("F=1,1/2/3;m=2,1");
  const Network net = zigzag_network(spec);
  EXPECT_EQ(net.num_nodes(), 6);
  EXPECT_EQ(net.num_edges(), 4 + 3 + 4);
  EXPECT_EQ(net.cap(net.edge_index("w1_2")).value(), 2);
  EXPECT_EQ(net.cap(net.edge_index("w2_1")).value(), 2);
  const std::vector<int> keep{2};
  EXPECT_THROW(zigzag_network(spec, &keep).edge_index("w1_1"), Error);
}

TEST(ZigZag, OneLayerIsTheFourNodeBound) {
  const auto r = zigzag_rate(parse_zigzag("F=2,2,2/1,1,1,1,1;m=1"), 2);
  EXPECT_EQ(r.rate, 7);
  EXPECT_EQ(r.full_bound, generalized_bound(fixture("fig11").network, 2).value);
  EXPECT_TRUE(r.certified_tight);
  EXPECT_EQ(r.best, std::vector<int>{1});
  const auto narrow = zigzag_rate(parse_zigzag("F=2,2,2/1,1,1,1;m=1"), 2);
  EXPECT_EQ(narrow.rate, 6);
  EXPECT_FALSE(narrow.certified_tight);
}

TEST(ZigZag, WideBundlesCertifyFullSet) {
  const auto r = zigzag_rate(parse_zigzag("F=1,1,1,1,1/1,1,1,1,1/1,1,1,1,1;m=1,1"), 2);
  EXPECT_TRUE(r.certified_tight);
  EXPECT_EQ(r.certificate, "all-later-bundles-wide");
  bool found = false;
  for (const auto& c : r.candidates)
    if (c.layers == std::vector<int>{1, 2}) {
      found = true;
      EXPECT_EQ(c.value, r.full_bound);
      EXPECT_NE(std::find(c.families.begin(), c.families.end(), "Q"), c.families.end());
    }
  EXPECT_TRUE(found);
  EXPECT_EQ(r.rate, r.full_bound);
}

TEST(ZigZag, StrongFeedbackLayerCertificate) {
  // Bundle 2 is narrow, layer 2 has z+1 feedback links and bundle 3 is wide.
  const auto r = zigzag_rate(parse_zigzag("F=2,2/1/1,1,1,1,1;m=1,2"), 1);
  EXPECT_EQ(r.certificate, "strong-feedback-layer-2");
  EXPECT_EQ(r.rate, r.full_bound);
}

TEST(ZigZag, TwoLayerModelOfFig6) {
  const auto r = zigzag_rate(parse_zigzag("F=6,2,2,1,1/3,3,3,3,3/2,2,1,1,1,1,1,1;m=5,1"), 4);
  EXPECT_FALSE(r.certified_tight);
  ASSERT_EQ(r.candidates.size(), 2u);
  for (const auto& c : r.candidates) {
    std::vector<int> keep = c.layers;
    const Network reduced = zigzag_network(parse_zigzag("F=6,2,2,1,1/3,3,3,3,3/2,2,1,1,1,1,1,1;m=5,1"), &keep);
    EXPECT_EQ(c.value, generalized_bound(reduced, 4).value);
    EXPECT_LE(c.value, r.rate);
  }
  EXPECT_LE(r.rate, r.full_bound);
}

TEST(ZigZag, CandidatesNeverExceedFullBound) {
  std::mt19937_64 rng(3);
  for (int t = 0; t < 15; ++t) {
    ZigZagSpec spec;
    const int k = 1 + static_cast<int>(rng() % 3);
    for (int i = 0; i <= k; ++i) {
      spec.forward.emplace_back();
      const int b = 1 + static_cast<int>(rng() % 4);
      for (int j = 0; j < b; ++j) spec.forward.back().push_back(1 + static_cast<int64_t>(rng() % 3));
    }
    for (int i = 0; i < k; ++i) spec.feedback.push_back(static_cast<int>(rng() % 3));
    const auto r = zigzag_rate(spec, 1);
    for (const auto& c : r.candidates) EXPECT_LE(c.value, r.full_bound) << format_zigzag(spec);
  }
}

TEST(ZigZag, LayerGuard) {
  ZigZagSpec spec;
  for (int i = 0; i < 8; ++i) spec.forward.push_back({1});
  spec.feedback.assign(7, 1);
  try {
    zigzag_rate(spec, 1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::GuardLimit);
  }
}

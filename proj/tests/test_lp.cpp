#include <gtest/gtest.h>

#include <random>

#include "nec/error.hpp"
#include "nec/feedback_lp.hpp"
#include "nec/fixtures.hpp"
#include "nec/protocols.hpp"

using namespace nec;

namespace {

FeedbackLpInstance of(const std::string& id) {
  const Fixture& f = fixture(id);
  return FeedbackLpInstance::from_four_node(four_node_instance(f.network, f.z));
}

std::vector<std::string> strings(const std::vector<Rational>& v) {
  std::vector<std::string> out;
  for (const auto& r : v) out.push_back(rational_string(r));
  return out;
}

}  // namespace

TEST(FeedbackLp, Fig14aNeedsThree) {
  const auto lp = of("fig14a");
  EXPECT_EQ(lp.cz, 6);
  const LpResult r = min_feedback_capacity(lp);
  EXPECT_EQ(rational_string(r.h), "3");
  EXPECT_EQ(r.objective, 3);
  EXPECT_FALSE(r.binding.empty());
}

TEST(FeedbackLp, Fig14bNeedsFiveWithKnownDegrees) {
  const LpResult r = min_feedback_capacity(of("fig14b"));
  EXPECT_EQ(rational_string(r.h), "5");
  const std::vector<int64_t> expected{5, 5, 3, 3, 2};
  EXPECT_EQ(r.integral_degrees(), expected);
}

TEST(FeedbackLp, SolutionPassesConditionCheck) {
  for (const char* id : {"fig11", "fig14a", "fig14b"}) {
    const auto lp = of(id);
    const LpResult r = min_feedback_capacity(lp);
    std::vector<int64_t> caps = lp.sa_caps;
    caps.insert(caps.end(), lp.bt_caps.begin(), lp.bt_caps.end());
    const auto check = check_conditions(caps, strings(r.f), lp.z, lp.m, lp.total() - lp.cz);
    EXPECT_TRUE(check.pass) << id << " violates condition " << check.violated;
  }
}

TEST(FeedbackLp, ZeroBudgetKeepsFullDegrees) {
  FeedbackLpInstance lp{{2, 3}, {1, 1}, 0, 1, 7, {}};
  const LpResult r = min_feedback_capacity(lp);
  EXPECT_EQ(r.h, 0);
  EXPECT_EQ(strings(r.f), (std::vector<std::string>{"2", "3", "1", "1"}));
}

TEST(FeedbackLp, FractionalOptimumRoundsDownWithWarning) {
  // Three unit links, every pair capped at 1: optimum 3/2 at f = 1/2 each.
  FeedbackLpInstance lp{{1, 1, 1}, {}, 1, 1, 2, {}};
  const LpResult r = min_feedback_capacity(lp);
  EXPECT_EQ(rational_string(r.objective), "3/2");
  EXPECT_EQ(rational_string(r.h), "3/2");
  EXPECT_FALSE(r.integral());
  std::string warning;
  EXPECT_EQ(r.integral_degrees(&warning), (std::vector<int64_t>{0, 0, 0}));
  EXPECT_NE(warning.find("1/2"), std::string::npos);
}

TEST(FeedbackLp, InfeasibleNamesConstraint) {
  // Fixed B->t capacity alone exceeds the slack.
  FeedbackLpInstance lp{{1}, {5, 5}, 1, 1, 8, {}};
  try {
    min_feedback_capacity(lp);
    FAIL() << "expected infeasible";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Infeasible);
    EXPECT_NE(std::string(e.what()).find("condition"), std::string::npos);
  }
}

TEST(FeedbackLp, RejectsMissingFeedbackAndLargeBudget) {
  EXPECT_THROW(min_feedback_capacity({{1, 1}, {1}, 1, 0, 1, {}}), Error);
  FeedbackLpInstance big{std::vector<int64_t>(14, 1), {}, 7, 1, 0, {}};
  try {
    min_feedback_capacity(big);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::GuardLimit);
  }
}

TEST(FeedbackLp, FreeBtNeverNeedsMore) {
  for (const char* id : {"fig11", "fig14a", "fig14b"}) {
    const auto lp = of(id);
    const LpResult fixed = min_feedback_capacity(lp);
    const LpResult free = min_feedback_capacity(lp, {true, 12});
    EXPECT_LE(free.h, fixed.h) << id;
  }
}

TEST(FeedbackLp, MatchesGridSearch) {
  for (const char* id : {"fig11", "fig14a", "fig14b"}) {
    const auto lp = of(id);
    const LpResult r = min_feedback_capacity(lp);
    const auto grid = grid_feedback_optimum(lp, 8, 300'000);
    ASSERT_FALSE(grid.empty()) << id;
    for (const auto& g : grid) {
      EXPECT_LE(g.objective, r.objective) << id << " d=" << g.denominator;
      if (r.integral()) EXPECT_EQ(g.objective, r.objective) << id << " d=" << g.denominator;
    }
  }
  FeedbackLpInstance frac{{1, 1, 1}, {}, 1, 1, 2, {}};
  for (const auto& g : grid_feedback_optimum(frac, 4)) EXPECT_EQ(g.objective, Rational(3 * g.denominator / 2, g.denominator));
}

TEST(FeedbackLp, RandomInstancesMatchGrid) {
  std::mt19937_64 rng(7);
  for (int t = 0; t < 40; ++t) {
    FeedbackLpInstance lp;
    const int a = 2 + static_cast<int>(rng() % 3), b = 1 + static_cast<int>(rng() % 3);
    for (int i = 0; i < a; ++i) lp.sa_caps.push_back(1 + static_cast<int64_t>(rng() % 3));
    for (int i = 0; i < b; ++i) lp.bt_caps.push_back(1 + static_cast<int64_t>(rng() % 2));
    lp.z = 1;
    lp.m = 1;
    lp.cz = static_cast<int64_t>(rng() % (lp.c1() + 1));
    LpResult r;
    try {
      r = min_feedback_capacity(lp);
    } catch (const Error& e) {
      ASSERT_EQ(e.kind(), ErrorKind::Infeasible);
      continue;
    }
    EXPECT_GE(r.h, 0);
    EXPECT_LE(r.objective, lp.c1());
    for (const auto& g : grid_feedback_optimum(lp, 4, 200'000)) {
      EXPECT_LE(g.objective, r.objective);
      if (g.denominator == 1 && r.integral()) EXPECT_EQ(g.objective, r.objective) << t;
    }
  }
}

TEST(FeedbackLp, JsonShape) {
  const auto j = min_feedback_capacity(of("fig14a")).to_json();
  EXPECT_EQ(j["h"], "3");
  EXPECT_EQ(j["f"].size(), 7u);
  EXPECT_TRUE(j.contains("binding_constraints"));
}

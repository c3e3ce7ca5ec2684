#include <gtest/gtest.h>

#include <algorithm>

#include "nec/error.hpp"
#include "nec/strategies.hpp"

using namespace nec;

namespace {

AdversaryAction corrupt(const ExampleStrategy& st, const std::string& edge, std::vector<int> positions) {
  AdversaryAction adv;
  adv.edges = {edge};
  Block blk(st.code.length[st.code.net.edge_index(edge)], 0);
  for (int p : positions) blk[p] = 1;
  adv.errors[edge] = {blk};
  return adv;
}

}  // namespace

TEST(Fig8Strategy, RateIsTwoMinusTwoOverN) {
  for (int n = 2; n <= 5; ++n) {
    const ExampleStrategy st = fig8_strategy(n);
    const SimulationTrace tr = run_example_strategy(st, {}, {4, 1, false});
    EXPECT_TRUE(tr.all_correct);
    EXPECT_DOUBLE_EQ(tr.empirical_rate(), 2.0 - 2.0 / n) << n;
  }
  EXPECT_EQ(run_example_strategy(fig8_strategy(4), {}, {2, 1, false}).rate_fraction(), "3/2");
}

TEST(Fig8Strategy, DecoderBranchFollowsFlags) {
  const ExampleStrategy st = fig8_strategy(3);
  auto branch = [&](const std::string& e, std::vector<int> pos) {
    const SimulationTrace tr = run_example_strategy(st, corrupt(st, e, pos), {2, 1, true});
    EXPECT_TRUE(tr.all_correct) << e;
    return tr.rounds[0].branch;
  };
  EXPECT_EQ(branch("l1", {0, 2}), "l12-l13");
  EXPECT_EQ(branch("l2", {0, 2}), "l10-l13");
  EXPECT_EQ(branch("l3", {0, 2}), "l10-l11");
  EXPECT_EQ(branch("l4", {0}), "bottom-mds");
  EXPECT_EQ(run_example_strategy(st, {}, {1, 1, true}).rounds[0].branch, "bottom-mds");
}

TEST(Fig8Strategy, SweepSmallBlock) {
  const SweepSummary s = sweep_example_strategy(fig8_strategy(2), 1, 3, 40, true);
  EXPECT_TRUE(s.all_correct) << s.first_failure;
  EXPECT_GT(s.adversaries_tested, 13);
}

TEST(Fig8Strategy, RejectsTwoLinks) {
  const ExampleStrategy st = fig8_strategy(2);
  AdversaryAction adv;
  adv.edges = {"l1", "l2"};
  EXPECT_THROW(run_example_strategy(st, adv, {1, 1, false}), Error);
  EXPECT_THROW(fig8_strategy(1), Error);
}

TEST(Fig9Strategy, TopLinkErrorIsCorrectedAtMiddleLayer) {
  const ExampleStrategy st = fig9_strategy();
  EXPECT_EQ(st.code.k, 8);
  AdversaryAction adv = corrupt(st, "l1", {0, 1, 2, 3});
  const SimulationTrace tr = run_example_strategy(st, adv, {3, 2, false});
  EXPECT_TRUE(tr.all_correct);
  EXPECT_DOUBLE_EQ(tr.empirical_rate(), 8.0);
}

TEST(Fig9Strategy, SampledSweep) {
  const SweepSummary s = sweep_example_strategy(fig9_strategy(), 1, 5, 12);
  EXPECT_TRUE(s.all_correct) << s.first_failure;
}

TEST(Fig10Strategy, SweepAndRate) {
  const ExampleStrategy st = fig10_strategy();
  EXPECT_DOUBLE_EQ(run_example_strategy(st, {}, {2, 1, false}).empirical_rate(), 4.0);
  const SweepSummary s = sweep_example_strategy(st, 1, 5, 12);
  EXPECT_TRUE(s.all_correct) << s.first_failure;
}

TEST(Certificate, RandomFig8CodesOverGF5) {
  const Field f(5);
  for (uint64_t seed = 0; seed < 10; ++seed) {
    const NetworkCode code = random_fig8_linear_code(f, 3, 2, seed);
    const Fig8Transfer t = fig8_transfer(code);
    const InsufficiencyCertificate cert = linear_insufficiency_certificate(f, t.gt, t.m1, t.m2, 3, 2);
    ASSERT_FALSE(cert.x.empty()) << seed;
    EXPECT_TRUE(std::any_of(cert.x.begin(), cert.x.end(), [](Sym s) { return s != 0; }));
    EXPECT_TRUE(verify_certificate(f, t.gt, t.m1, t.m2, cert)) << seed;
  }
}

TEST(Certificate, DeclinesAtBoundary) {
  const Field f(5);
  const Fig8Transfer t = fig8_transfer(random_fig8_linear_code(f, 4, 3, 1));
  try {
    linear_insufficiency_certificate(f, t.gt, t.m1, t.m2, 4, 3);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Precondition);
  }
}

TEST(Certificate, RankDeficientM1) {
  const Field f(5);
  Matrix gt(4, 3), m1(4, 2), m2(4, 4);
  for (int i = 0; i < 3; ++i) gt.at(i, i) = 1;
  for (int i = 0; i < 4; ++i) m2.at(i, i) = 1;
  const InsufficiencyCertificate cert = linear_insufficiency_certificate(f, gt, m1, m2, 3, 2);
  EXPECT_EQ(cert.kind, "rank-deficient");
  EXPECT_EQ(cert.deficient, "M1");
  EXPECT_EQ(cert.rank_m1, 0);
  EXPECT_TRUE(verify_certificate(f, gt, m1, m2, cert));
}

TEST(Certificate, TamperedPairFailsVerification) {
  const Field f(5);
  const Fig8Transfer t = fig8_transfer(random_fig8_linear_code(f, 3, 2, 2));
  InsufficiencyCertificate cert = linear_insufficiency_certificate(f, t.gt, t.m1, t.m2, 3, 2);
  ASSERT_FALSE(cert.x.empty());
  cert.x[0] = f.add(cert.x[0], 1);
  EXPECT_FALSE(verify_certificate(f, t.gt, t.m1, t.m2, cert));
}

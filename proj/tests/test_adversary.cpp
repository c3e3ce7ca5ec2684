#include <gtest/gtest.h>

#include <random>

#include "nec/adversary.hpp"
#include "nec/bounds.hpp"
#include "nec/error.hpp"
#include "nec/fixtures.hpp"

using namespace nec;

namespace {

// Three parallel unit links s -> t.
Network parallel(int n) {
  std::vector<Edge> edges;
  for (int i = 0; i < n; ++i) edges.push_back({"e" + std::to_string(i + 1), "s", "t", Capacity::finite(1)});
  return Network::build({"s", "t"}, edges, "s", "t");
}

std::vector<Sym> random_vec(std::mt19937_64& rng, int n, uint32_t q) {
  std::vector<Sym> v(n);
  for (auto& x : v) x = static_cast<Sym>(rng() % q);
  return v;
}

}  // namespace

TEST(Adversary, ErrorWeightCountsNonzeroBlocks) {
  EXPECT_EQ(error_weight({{}, {0, 0}, {0, 1}, {2}}), 2);
  EXPECT_EQ(error_weight({}), 0);
}

TEST(Adversary, TransferMatricesReproduceEvaluation) {
  const Field f(5);
  const Network& net = fixture("fig8").network;
  const NetworkCode code = random_linear_code(net, f, 2, default_lengths(net, 2), 9);
  const Matrix gm = message_transfer(code);
  std::mt19937_64 rng(1);
  for (int t = 0; t < 30; ++t) {
    const auto w = random_vec(rng, 2, 5);
    const int edge = static_cast<int>(rng() % net.num_edges());
    ErrorVector errors(net.num_edges());
    errors[edge] = random_vec(rng, code.length[edge], 5);
    std::vector<Sym> expected = mul(f, gm, w);
    const std::vector<Sym> contribution = mul(f, error_transfer(code, edge), errors[edge]);
    for (size_t i = 0; i < expected.size(); ++i) expected[i] = f.add(expected[i], contribution[i]);
    EXPECT_EQ(flatten(evaluate(code, w, errors)), expected);
  }
}

TEST(Adversary, RepetitionCodeIsCorrecting) {
  // Three parallel links all carrying the message symbol: majority decoding beats one error.
  const Field f(3);
  const Network net = parallel(3);
  std::vector<Matrix> maps(3, Matrix(1, 1));
  for (auto& m : maps) m.at(0, 0) = 1;
  const NetworkCode code = linear_network_code(net, f, 1, default_lengths(net, 1), maps);
  EXPECT_FALSE(find_confusable(code, 1).has_value());
  EXPECT_FALSE(find_confusable_enumerative(code, 1).has_value());
  ErrorVector e(3);
  e[1] = {2};
  const auto sink = evaluate(code, {1}, e);
  ASSERT_TRUE(decode_linear(code, sink, 1).has_value());
  EXPECT_EQ(*decode_linear(code, sink, 1), std::vector<Sym>{1});
}

TEST(Adversary, TwoCopiesAreConfusable) {
  const Field f(3);
  const Network net = parallel(2);
  std::vector<Matrix> maps(2, Matrix(1, 1));
  for (auto& m : maps) m.at(0, 0) = 1;
  const NetworkCode code = linear_network_code(net, f, 1, default_lengths(net, 1), maps);
  const auto c = find_confusable(code, 1);
  ASSERT_TRUE(c.has_value());
  EXPECT_NE(c->w, c->w_prime);
  EXPECT_LE(error_weight(c->e), 1);
  EXPECT_LE(error_weight(c->e_prime), 1);
  EXPECT_EQ(evaluate(code, c->w, c->e), evaluate(code, c->w_prime, c->e_prime));
}

TEST(Adversary, LinearAndEnumerativeSearchesAgree) {
  const Field f(2);
  for (uint64_t seed = 0; seed < 25; ++seed) {
    const Network net = random_network(seed, 4, 1);
    for (int k = 1; k <= 2; ++k) {
      const NetworkCode code = random_linear_code(net, f, k, default_lengths(net, 1), seed * 7 + k);
      const bool lin = find_confusable(code, 1).has_value();
      const bool enu = find_confusable_enumerative(code, 1).has_value();
      EXPECT_EQ(lin, enu) << "seed " << seed << " k " << k;
    }
  }
}

TEST(Adversary, NoCodeBeatsTheGeneralizedBound) {
  // A confusable-free random code is a witness that k is achievable at block length 1.
  const Field f(2);
  for (uint64_t seed = 0; seed < 20; ++seed) {
    const Network net = random_network(seed, 4, 1);
    const int64_t bound = generalized_bound(net, 1).value;
    for (int k = static_cast<int>(bound) + 1; k <= bound + 1; ++k)
      for (uint64_t s = 0; s < 5; ++s) {
        const NetworkCode code = random_linear_code(net, f, k, default_lengths(net, 1), s);
        EXPECT_TRUE(find_confusable(code, 1).has_value()) << "seed " << seed;
      }
  }
}

TEST(Oracle, ParallelLinksMatchCodingTheory) {
  // Binary codes with distance 3: length 3 holds 2 words, length 5 holds 4.
  EXPECT_EQ(micro_capacity_oracle(TwoNodeNetwork{{1, 1, 1}, {}, 1}, 2).k, 1);
  EXPECT_EQ(micro_capacity_oracle(TwoNodeNetwork{{1, 1, 1, 1, 1}, {}, 1}, 2).k, 2);
  EXPECT_EQ(micro_capacity_oracle(TwoNodeNetwork{{1, 1}, {}, 1}, 2).k, 0);
  const OracleResult r = micro_capacity_oracle(TwoNodeNetwork{{1, 1, 1, 1}, {}, 1}, 2);
  EXPECT_EQ(r.k, 1);
  EXPECT_EQ(r.max_codebook, 2);
}

TEST(Oracle, NeverExceedsTwoNodeFormula) {
  for (int n = 1; n <= 4; ++n)
    for (int m = 0; m <= 1; ++m)
      for (int z = 0; z <= 1; ++z) {
        TwoNodeNetwork net{std::vector<int64_t>(n, 1), std::vector<int64_t>(m, 1), z};
        EXPECT_LE(micro_capacity_oracle(net, 2).k, two_node_bound(net.forward_caps, m, z).value)
            << n << " " << m << " " << z;
      }
}

TEST(Oracle, GuardsInstanceSize) {
  EXPECT_THROW(micro_capacity_oracle(TwoNodeNetwork{std::vector<int64_t>(7, 1), {}, 1}, 2), Error);
  EXPECT_THROW(micro_capacity_oracle(fixture("fig4").network, 1, 2), Error);
}

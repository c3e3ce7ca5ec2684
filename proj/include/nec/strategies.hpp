#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "nec/adversary.hpp"
#include "nec/protocols.hpp"

namespace nec {

struct StrategyDecode {
  std::optional<std::vector<Sym>> message;
  std::string branch;
};

// Block strategy on one of the layered example networks: edge maps for one block of `uses_per_block`
// channel uses and the sink decoder.
struct ExampleStrategy {
  std::string fixture;
  NetworkCode code;
  int uses_per_block = 1;
  int z = 1;
  std::function<StrategyDecode(const std::vector<Block>& sink)> decode;
  std::string description;
};

// fig8: nonlinear detection. Packets of n-1 symbols plus one flag symbol per block of n uses.
// Middle layer sends a*P1+b*P2, P1, P1, P2, P2, c*P1+d*P2 with (a, b, c, d) = (1, 1, 1, 2).
ExampleStrategy fig8_strategy(int n, uint32_t q = 5);
// fig9: forwarding except a (4,2) MDS decoder at each correcting node, (12,8) MDS at the sink.
ExampleStrategy fig9_strategy(const std::vector<std::string>& correcting = {"Y3", "Y4"}, uint32_t q = 13);
// fig10: random linear code resampled until no confusable pair exists for one adversarial link.
ExampleStrategy fig10_strategy(uint32_t q = 13, uint64_t seed = 1, int retries = 200);
// By fixture id with default parameters (fig8 uses n = 4).
ExampleStrategy example_strategy(const std::string& fixture_id, uint64_t seed = 1);

// Throws adversary-budget-violation for more than z links (z = 1 for all three examples).
SimulationTrace run_example_strategy(const ExampleStrategy& st, const AdversaryAction& adv, const SimOptions& opt,
                                     bool every_message = false);
// Every edge subset of size <= z and every nonzero error block (seeded sample above `value_cap`). With
// `every_message` each adversary is run once per message instead of on `rounds` random messages.
SweepSummary sweep_example_strategy(const ExampleStrategy& st, int rounds, uint64_t seed, int64_t value_cap = 30000,
                                    bool every_message = false);

// Scalar linear code over n rounds on fig8 with errors on l1 and l3: nonzero x and e with
// G_t x = [M1 | M2] e. Declines (precondition-violated) unless 3k > 4n. When rank(M1) or rank(M2) is below k
// the result is a rank-deficiency certificate; the pair is still filled in when one exists.
struct InsufficiencyCertificate {
  std::string kind;  // "intersection" or "rank-deficient"
  std::vector<Sym> x;       // empty when no pair exists
  std::vector<Sym> e;       // e1 then e2
  std::string deficient;    // "M1" or "M2" for a rank-deficiency certificate
  int rank_m1 = 0, rank_m2 = 0;
};
InsufficiencyCertificate linear_insufficiency_certificate(const Field& f, const Matrix& gt, const Matrix& m1,
                                                          const Matrix& m2, int k, int n);
// Transfer matrices (G_t, M1, M2) of a linear code on fig8.
struct Fig8Transfer {
  Matrix gt, m1, m2;
};
Fig8Transfer fig8_transfer(const NetworkCode& code);
// Random scalar linear code on fig8 over n rounds carrying k symbols.
NetworkCode random_fig8_linear_code(const Field& f, int k, int n, uint64_t seed);
bool verify_certificate(const Field& f, const Matrix& gt, const Matrix& m1, const Matrix& m2,
                        const InsufficiencyCertificate& cert);

}  // namespace nec

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "nec/code.hpp"
#include "nec/network.hpp"

namespace nec {

using ordered_json = nlohmann::ordered_json;

// What an adversarial link does with claim traffic it carries.
enum class ClaimMode { Relay, Suppress, Forge };
const char* claim_mode_name(ClaimMode m);

// Fixed edge set for the whole run plus per-round error blocks.
struct AdversaryAction {
  std::vector<std::string> edges;
  std::map<std::string, std::vector<Block>> errors;  // one block per round, last one repeats; missing = no error
  std::map<std::string, ClaimMode> claim_mode;       // default Relay

  Block error_at(const std::string& edge, int round) const;  // empty when no error
  ClaimMode mode_of(const std::string& edge) const;
  bool controls(const std::string& edge) const;
  // Throws adversary-budget-violation when more than z edges are used or an error sits off the edge set.
  void validate(int z) const;
  ordered_json to_json() const;
};

struct RoundRecord {
  int round = 0;
  std::vector<Sym> message;
  ordered_json tx = ordered_json::object();
  std::vector<std::string> adversary_edges;
  ordered_json errors = ordered_json::object();
  ordered_json feedback = ordered_json::object();
  ordered_json claims = ordered_json::array();
  std::vector<std::string> identified;  // newly marked adversarial while decoding this round
  std::optional<std::vector<Sym>> decoded;
  std::string branch;  // decoder path taken
  bool ok = false;
};

struct SimulationTrace {
  std::string protocol;
  std::string instance;
  int z = 0;
  uint32_t q = 0;
  uint64_t seed = 0;
  int64_t symbols_per_round = 0;  // message symbols carried by one data round
  int64_t uses_per_round = 1;     // channel uses taken by one data round
  int64_t data_uses = 0;          // channel uses spent on data rounds
  int64_t overhead_uses = 0;      // channel uses spent on feedback relays and claims
  int claim_events = 0;           // rounds in which claims (or inconsistency reports) were sent
  bool all_correct = true;
  bool false_accusation = false;
  std::vector<std::string> identified;  // all links the decoder marked adversarial
  std::vector<RoundRecord> rounds;      // empty when recording is off
  std::string note;

  // Decoded message symbols per channel use.
  double empirical_rate() const;
  std::string rate_fraction() const;  // same value, exact and reduced, as "p/q"
  ordered_json summary_json() const;
  std::string jsonl() const;  // one record per round
};

struct SweepSummary {
  std::string fixture;
  int z = 0;
  uint32_t q = 0;
  int rounds = 0;
  int64_t adversaries_tested = 0;
  double min_rate = 0;
  bool all_correct = true;
  bool false_accusation = false;
  int max_claim_events = 0;
  std::string first_failure;  // adversary description of the first failing run
  ordered_json to_json() const;
  void absorb(const SimulationTrace& t, const AdversaryAction& adv);
};

struct SimOptions {
  int rounds = 3;
  uint64_t seed = 1;
  bool record = true;
};

// ---- two-node network ----

// Link ids: forward f1..fn, feedback b1..bm.
SimulationTrace simulate_two_node(const TwoNodeNetwork& net, uint32_t q, const AdversaryAction& adv,
                                  const SimOptions& opt);
// Smallest prime above the total forward capacity (needed by the MDS code).
uint32_t two_node_field(const TwoNodeNetwork& net);

// Exhaustive: every edge subset of size <= z, every nonzero error value per edge (held fixed over the
// horizon), every claim mode on forward links. Feedback error values are enumerated in full when the
// value space is at most `value_cap`, otherwise a seeded sample of that size is drawn.
SweepSummary sweep_two_node(const TwoNodeNetwork& net, uint32_t q, int rounds, uint64_t seed,
                            int64_t value_cap = 20000);

// ---- four-node network ----

struct FourNodeInstance {
  Network net;
  int z = 0;
  std::vector<int> sa, bt, fb;  // edge indices: s->A links, B->t links, A->B feedback links
  int64_t c1 = 0, c2 = 0, cz = 0;
  int64_t total() const { return c1 + c2; }
  int a() const { return static_cast<int>(sa.size()); }
  int b() const { return static_cast<int>(bt.size()); }
  int m() const { return static_cast<int>(fb.size()); }
  std::vector<int64_t> forward_caps() const;  // s->A then B->t
};

// Recognizes the s, A, B, t shape (unbounded s->B and A->t). Throws not-four-node.
FourNodeInstance four_node_instance(const Network& net, int z);

// Encoding matrices at A, one per s->A link: r(l) x k_l.
struct EncoderAtA {
  std::vector<Matrix> maps;
  int feedback_length() const;  // h = total number of columns
};

// Columns (p+1)^j, j < r - f: rank r - f whenever q > r.
EncoderAtA encoder_from_degrees(const Field& f, const std::vector<int64_t>& caps, const std::vector<int64_t>& degrees);
std::vector<int64_t> degree_of_freedom(const Field& f, const EncoderAtA& enc);

struct ConditionCheck {
  bool pass = true;
  int violated = 0;             // 1 or 2
  std::vector<int> set_a, set_b;  // indices into the forward list (s->A first, then B->t)
  std::string lhs, rhs;         // rationals as "p/q"
};

// Degrees are given for all forward links (B->t entries equal the capacity) as "p/q" or integer strings.
ConditionCheck check_conditions(const std::vector<int64_t>& caps, const std::vector<std::string>& degrees, int z,
                                int m, int64_t slack);
ConditionCheck check_conditions(const std::vector<int64_t>& caps, const std::vector<int64_t>& degrees, int z, int m,
                                int64_t slack);

// (C, C_z) code over the forward links that is MDS and corrects z feedback-preserving errors.
struct ForwardCode {
  BlockCode code;
  int attempts = 0;
  std::string construction;  // "vandermonde" or "random"
};
ForwardCode sample_generic_forward_code(const FourNodeInstance& inst, const Field& f, const EncoderAtA& enc,
                                        uint64_t seed, int retries = 5000);
// The verification step on its own: every 2z-link support with feedback-preserving errors on s->A links.
bool corrects_feedback_preserving(const FourNodeInstance& inst, const Field& f, const EncoderAtA& enc,
                                  const BlockCode& code);
// Stronger check used by the sink after identifications: any mix of erased links and feedback-preserving
// errors whose total dimension fits in C - C_z still determines the message. Throws verification-too-large.
bool separates_mixed_erasures(const FourNodeInstance& inst, const Field& f, const EncoderAtA& enc, const BlockCode& code,
                              int64_t combo_limit = 200000);

struct FourNodeSetup {
  FourNodeInstance inst;
  Field field{2};
  EncoderAtA enc;
  ForwardCode code;
};
// Builds the encoder from the given degrees (s->A only) and samples the forward code.
// Throws feedback-capacity-below-h when some feedback link cannot carry the encoder output.
FourNodeSetup prepare_four_node(const FourNodeInstance& inst, uint32_t q, const std::vector<int64_t>& degrees,
                                uint64_t seed);

SimulationTrace simulate_four_node(const FourNodeSetup& setup, const AdversaryAction& adv, const SimOptions& opt);

// Exhaustive sweep over edge subsets of size <= z, nonzero error values per edge (full value space when at
// most `value_cap`, else a seeded sample), and claim modes on B->t links.
SweepSummary sweep_four_node(const FourNodeSetup& setup, int rounds, uint64_t seed, int64_t value_cap = 5000);

// Randomized adversaries with per-round fresh errors.
SweepSummary random_sweep_four_node(const FourNodeSetup& setup, int rounds, int runs, uint64_t seed);

// ---- shared helpers ----

// All error blocks of a given length with at least one nonzero symbol, in counting order.
std::vector<Block> nonzero_blocks(uint32_t q, int length);
int64_t block_space(uint32_t q, int length, int64_t cap);  // q^length - 1, saturating at cap + 1

}  // namespace nec

#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "nec/code.hpp"
#include "nec/network.hpp"

namespace nec {

// Per-edge error blocks; an empty block means no error on that edge.
using ErrorVector = std::vector<Block>;

int error_weight(const ErrorVector& e);

// Block-length-1 network code: each edge's block is a function of the source message (for
// source edges) or of the blocks on the tail node's incoming edges (ascending edge order).
struct NetworkCode {
  using LocalMap = std::function<Block(const std::vector<Sym>& message, const std::vector<Block>& inputs)>;

  Network net;
  Field field{2};
  int k = 0;
  std::vector<int> length;        // symbols per edge
  std::vector<LocalMap> local;    // per edge
  std::vector<Matrix> linear;     // per edge when the code is linear: block = M [message; inputs]
  std::vector<bool> adversarial;  // edges the adversary may control (finite-capacity edges by default)

  bool is_linear() const { return !linear.empty(); }
  int input_length(int e) const;
};

// Default block lengths: capacity for finite edges, `unbounded_length` for UNBOUNDED ones.
std::vector<int> default_lengths(const Network& net, int unbounded_length);

NetworkCode linear_network_code(const Network& net, const Field& f, int k, std::vector<int> length,
                                std::vector<Matrix> maps);
// Uniformly random local coefficients.
NetworkCode random_linear_code(const Network& net, const Field& f, int k, std::vector<int> length, uint64_t seed);

struct Evaluation {
  std::vector<Block> edges;  // every edge output (after errors)
  std::vector<Block> sink;   // blocks on the sink's incoming edges, ascending edge order
};

Evaluation evaluate_all(const NetworkCode& code, const std::vector<Sym>& w, const ErrorVector& errors);
std::vector<Block> evaluate(const NetworkCode& code, const std::vector<Sym>& w, const ErrorVector& errors);

// Sink transfer matrices of a linear code: one column per unit message symbol, or per unit error symbol on
// one edge. Throws not-linear.
Matrix message_transfer(const NetworkCode& code);
Matrix error_transfer(const NetworkCode& code, int edge);

// Sink decoder for a linear code: tries error supports of size <= z in order and returns the message part of
// the first solution. Correct whenever find_confusable reports none.
std::optional<std::vector<Sym>> decode_linear(const NetworkCode& code, const std::vector<Block>& sink, int z);

struct Confusable {
  std::vector<Sym> w, w_prime;
  ErrorVector e, e_prime;
  std::vector<Block> sink_observation;
};

// Exhaustive search over messages and adversarial actions of weight <= z (block length 1).
// Linear codes use the transfer-matrix form of the search. Throws search-space-limit.
std::optional<Confusable> find_confusable(const NetworkCode& code, int z, uint64_t limit = 20'000'000);
std::optional<Confusable> find_confusable_enumerative(const NetworkCode& code, int z, uint64_t limit = 2'000'000);

// Largest k such that a block-length-1 z-correcting code with q^k messages exists.
struct OracleResult {
  int k = 0;
  int64_t max_codebook = 0;  // largest codebook size found (parallel-link mode)
  std::string mode;          // "nonlinear-codebook" or "linear"
};
OracleResult micro_capacity_oracle(const TwoNodeNetwork& net, uint32_t q);
OracleResult micro_capacity_oracle(const Network& net, int z, uint32_t q);

}  // namespace nec

#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "nec/field.hpp"

namespace nec {

using Block = std::vector<Sym>;

struct LayoutEntry {
  std::string edge;
  int length = 1;
};

// Linear block code: message in GF(q)^k, codeword positions grouped by edge.
struct BlockCode {
  Field field{2};
  int k = 0;
  std::vector<LayoutEntry> layout;  // ordered by edge id
  Matrix generator;                 // k x N
  bool mds = false;

  int length() const { return generator.cols; }
  int offset(size_t entry) const;  // first position of a layout entry
  int entry_of(const std::string& edge) const;
};

// Layout from (edge, length) pairs, sorted by edge id.
std::vector<LayoutEntry> make_layout(std::vector<LayoutEntry> entries);
std::vector<LayoutEntry> unit_layout(int n, const std::string& prefix = "c");

// Vandermonde code with evaluation points 0..N-1; needs q > N.
BlockCode make_mds(const Field& f, int n, int k);
BlockCode make_mds(const Field& f, const std::vector<LayoutEntry>& layout, int k);

std::vector<Sym> encode_flat(const BlockCode& code, const std::vector<Sym>& message);
std::vector<Block> encode(const BlockCode& code, const std::vector<Sym>& message);
std::vector<Sym> flatten(const std::vector<Block>& blocks);

struct DecodeOutcome {
  bool consistent = false;
  std::vector<Sym> message;  // valid when consistent
};

// Decodes from every k-symbol selection inside `edges`; consistent iff all selections agree.
// Throws insufficient-capacity when the selected edges carry fewer than k symbols.
DecodeOutcome subset_decode(const BlockCode& code, const std::vector<Block>& observed, const std::vector<std::string>& edges);
// Literal enumeration of all k-selections; reference for subset_decode.
DecodeOutcome subset_decode_exhaustive(const BlockCode& code, const std::vector<Block>& observed,
                                       const std::vector<std::string>& edges);

bool all_minors_invertible(const BlockCode& code);

// Codeword tests on position sets of an MDS code; inverses of information sets are cached.
class ConsistencyChecker {
 public:
  explicit ConsistencyChecker(const BlockCode& code);
  std::vector<int> positions_of(const std::vector<int>& entries) const;  // entries = layout indices
  // The message when `word` restricted to `pos` is a codeword, nullopt otherwise or when pos has < k symbols.
  std::optional<std::vector<Sym>> consistent(const std::vector<Sym>& word, const std::vector<int>& pos) const;
  const BlockCode& code() const { return code_; }

 private:
  BlockCode code_;
  std::vector<int> offsets_;
  mutable std::map<std::vector<int>, Matrix> inverse_;
};

std::vector<Block> repetition_encode(const Block& payload, int copies);
Block repetition_decode(const std::vector<Block>& copies);  // throws no-majority

// Calls visit(indices) for every k-subset of {0..n-1} in lexicographic order; stops when visit returns false.
template <class Visit>
void for_each_combination(int n, int k, Visit&& visit) {
  if (k < 0 || k > n) return;
  std::vector<int> idx(k);
  for (int i = 0; i < k; ++i) idx[i] = i;
  while (true) {
    if (!visit(static_cast<const std::vector<int>&>(idx))) return;
    int i = k - 1;
    while (i >= 0 && idx[i] == n - k + i) --i;
    if (i < 0) return;
    ++idx[i];
    for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
}

}  // namespace nec

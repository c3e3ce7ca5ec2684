#include "nec/code.hpp"

#include <algorithm>
#include <map>

#include "nec/error.hpp"
#include "nec/network.hpp"

namespace nec {

int BlockCode::offset(size_t entry) const {
  int off = 0;
  for (size_t i = 0; i < entry; ++i) off += layout[i].length;
  return off;
}

int BlockCode::entry_of(const std::string& edge) const {
  for (size_t i = 0; i < layout.size(); ++i)
    if (layout[i].edge == edge) return static_cast<int>(i);
  fail(ErrorKind::InvalidInput, "layout-mismatch", "edge " + edge + " not in code layout");
}

std::vector<LayoutEntry> make_layout(std::vector<LayoutEntry> entries) {
  std::sort(entries.begin(), entries.end(), [](const LayoutEntry& a, const LayoutEntry& b) { return natural_less(a.edge, b.edge); });
  for (size_t i = 1; i < entries.size(); ++i)
    if (entries[i].edge == entries[i - 1].edge) fail(ErrorKind::InvalidInput, "layout-mismatch", "duplicate edge " + entries[i].edge);
  return entries;
}

std::vector<LayoutEntry> unit_layout(int n, const std::string& prefix) {
  std::vector<LayoutEntry> out;
  for (int i = 0; i < n; ++i) out.push_back({prefix + std::to_string(i), 1});
  return make_layout(out);
}

BlockCode make_mds(const Field& f, int n, int k) { return make_mds(f, unit_layout(n), k); }

BlockCode make_mds(const Field& f, const std::vector<LayoutEntry>& layout, int k) {
  int n = 0;
  for (const auto& e : layout) n += e.length;
  if (k < 0 || k > n) fail(ErrorKind::InvalidInput, "bad-dimension", "k=" + std::to_string(k) + " N=" + std::to_string(n));
  if (f.q() <= static_cast<uint32_t>(n))
    fail(ErrorKind::Precondition, "field-too-small", "q=" + std::to_string(f.q()) + " must exceed N=" + std::to_string(n));
  BlockCode c;
  c.field = f;
  c.k = k;
  c.layout = layout;
  c.generator = Matrix(k, n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < k; ++i) c.generator.at(i, j) = f.pow(static_cast<Sym>(j), i);
  c.mds = true;
  return c;
}

std::vector<Sym> encode_flat(const BlockCode& code, const std::vector<Sym>& message) {
  if (static_cast<int>(message.size()) != code.k) fail(ErrorKind::InvalidInput, "layout-mismatch", "message length");
  return vec_mul(code.field, message, code.generator);
}

std::vector<Block> encode(const BlockCode& code, const std::vector<Sym>& message) {
  auto flat = encode_flat(code, message);
  std::vector<Block> out;
  int pos = 0;
  for (const auto& e : code.layout) {
    out.emplace_back(flat.begin() + pos, flat.begin() + pos + e.length);
    pos += e.length;
  }
  return out;
}

std::vector<Sym> flatten(const std::vector<Block>& blocks) {
  std::vector<Sym> out;
  for (const auto& b : blocks) out.insert(out.end(), b.begin(), b.end());
  return out;
}

namespace {

std::vector<int> positions(const BlockCode& code, const std::vector<Block>& observed, const std::vector<std::string>& edges) {
  if (observed.size() != code.layout.size()) fail(ErrorKind::InvalidInput, "layout-mismatch", "block count");
  for (size_t i = 0; i < observed.size(); ++i)
    if (static_cast<int>(observed[i].size()) != code.layout[i].length)
      fail(ErrorKind::InvalidInput, "layout-mismatch", "block length on " + code.layout[i].edge);
  std::vector<int> entries;
  for (const auto& e : edges) entries.push_back(code.entry_of(e));
  std::sort(entries.begin(), entries.end());
  entries.erase(std::unique(entries.begin(), entries.end()), entries.end());
  std::vector<int> pos;
  for (int en : entries)
    for (int j = 0; j < code.layout[en].length; ++j) pos.push_back(code.offset(en) + j);
  if (static_cast<int>(pos.size()) < code.k)
    fail(ErrorKind::Precondition, "insufficient-capacity",
         std::to_string(pos.size()) + " symbols < k=" + std::to_string(code.k));
  return pos;
}

std::optional<std::vector<Sym>> decode_at(const BlockCode& code, const std::vector<Sym>& y, const std::vector<int>& sel) {
  Matrix sub = code.generator.columns(sel).transpose();  // k x k, rows = positions
  std::vector<Sym> rhs;
  for (int p : sel) rhs.push_back(y[p]);
  if (rank(code.field, sub) < code.k) return std::nullopt;
  return solve(code.field, sub, rhs);
}

}  // namespace

DecodeOutcome subset_decode_exhaustive(const BlockCode& code, const std::vector<Block>& observed,
                                       const std::vector<std::string>& edges) {
  auto pos = positions(code, observed, edges);
  auto y = flatten(observed);
  DecodeOutcome out;
  bool first = true, agree = true;
  for_each_combination(static_cast<int>(pos.size()), code.k, [&](const std::vector<int>& pick) {
    std::vector<int> sel;
    for (int i : pick) sel.push_back(pos[i]);
    auto m = decode_at(code, y, sel);
    if (!m) return true;
    if (first) {
      out.message = *m;
      first = false;
    } else if (*m != out.message) {
      agree = false;
      return false;
    }
    return true;
  });
  out.consistent = agree && !first;
  if (!out.consistent) out.message.clear();
  return out;
}

DecodeOutcome subset_decode(const BlockCode& code, const std::vector<Block>& observed, const std::vector<std::string>& edges) {
  if (!code.mds) return subset_decode_exhaustive(code, observed, edges);
  // For an MDS code every selection is invertible, so all selections agree exactly when the
  // observation restricted to the positions is a codeword.
  auto pos = positions(code, observed, edges);
  auto y = flatten(observed);
  std::vector<int> first(pos.begin(), pos.begin() + code.k);
  auto m = decode_at(code, y, first);
  ensure(m.has_value(), "MDS selection is singular");
  auto cw = encode_flat(code, *m);
  DecodeOutcome out;
  for (int p : pos)
    if (cw[p] != y[p]) return out;
  out.consistent = true;
  out.message = *m;
  return out;
}

bool all_minors_invertible(const BlockCode& code) {
  bool ok = true;
  for_each_combination(code.length(), code.k, [&](const std::vector<int>& sel) {
    ok = determinant(code.field, code.generator.columns(sel)) != 0;
    return ok;
  });
  return ok;
}

ConsistencyChecker::ConsistencyChecker(const BlockCode& code) : code_(code) {
  ensure(code.mds, "consistency checks need an MDS code");
  for (size_t i = 0; i < code.layout.size(); ++i) offsets_.push_back(code.offset(i));
}

std::vector<int> ConsistencyChecker::positions_of(const std::vector<int>& entries) const {
  std::vector<int> pos;
  for (int en : entries)
    for (int j = 0; j < code_.layout[en].length; ++j) pos.push_back(offsets_[en] + j);
  std::sort(pos.begin(), pos.end());
  return pos;
}

std::optional<std::vector<Sym>> ConsistencyChecker::consistent(const std::vector<Sym>& word, const std::vector<int>& pos) const {
  const int k = code_.k;
  const Field& f = code_.field;
  if (static_cast<int>(pos.size()) < k) return std::nullopt;
  std::vector<int> info(pos.begin(), pos.begin() + k);
  auto it = inverse_.find(info);
  if (it == inverse_.end()) {
    auto inv = inverse(f, code_.generator.columns(info));
    ensure(inv.has_value(), "MDS information set is singular");
    it = inverse_.emplace(info, std::move(*inv)).first;
  }
  std::vector<Sym> y;
  for (int p : info) y.push_back(word[p]);
  std::vector<Sym> m = vec_mul(f, y, it->second);
  for (size_t i = k; i < pos.size(); ++i) {
    Sym v = 0;
    for (int r = 0; r < k; ++r) v = f.add(v, f.mul(m[r], code_.generator.at(r, pos[i])));
    if (v != word[pos[i]]) return std::nullopt;
  }
  return m;
}

std::vector<Block> repetition_encode(const Block& payload, int copies) { return std::vector<Block>(copies, payload); }

Block repetition_decode(const std::vector<Block>& copies) {
  std::map<Block, int> count;
  for (const auto& c : copies) ++count[c];
  for (const auto& [value, n] : count)
    if (2 * n > static_cast<int>(copies.size())) return value;
  fail(ErrorKind::Precondition, "no-majority", std::to_string(copies.size()) + " copies without a strict majority");
}

}  // namespace nec

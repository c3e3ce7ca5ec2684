#include <algorithm>
#include <numeric>
#include <sstream>

#include "nec/error.hpp"
#include "nec/protocols.hpp"

namespace nec {

const char* claim_mode_name(ClaimMode m) {
  switch (m) {
    case ClaimMode::Relay: return "relay";
    case ClaimMode::Suppress: return "suppress";
    case ClaimMode::Forge: return "forge";
  }
  return "?";
}

Block AdversaryAction::error_at(const std::string& edge, int round) const {
  auto it = errors.find(edge);
  if (it == errors.end() || it->second.empty()) return {};
  const auto& seq = it->second;
  return seq[std::min<size_t>(static_cast<size_t>(round), seq.size() - 1)];
}

ClaimMode AdversaryAction::mode_of(const std::string& edge) const {
  auto it = claim_mode.find(edge);
  return it == claim_mode.end() ? ClaimMode::Relay : it->second;
}

bool AdversaryAction::controls(const std::string& edge) const {
  return std::find(edges.begin(), edges.end(), edge) != edges.end();
}

void AdversaryAction::validate(int z) const {
  std::vector<std::string> sorted = edges;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
    fail(ErrorKind::InvalidInput, "adversary-budget-violation", "duplicate adversarial edge");
  if (static_cast<int>(edges.size()) > z)
    fail(ErrorKind::InvalidInput, "adversary-budget-violation",
         std::to_string(edges.size()) + " edges chosen with budget " + std::to_string(z));
  for (const auto& [e, seq] : errors)
    if (!controls(e) && !seq.empty())
      fail(ErrorKind::InvalidInput, "adversary-budget-violation", "error on uncontrolled edge " + e);
  for (const auto& [e, mode] : claim_mode)
    if (!controls(e) && mode != ClaimMode::Relay)
      fail(ErrorKind::InvalidInput, "adversary-budget-violation", "claim tampering on uncontrolled edge " + e);
}

ordered_json AdversaryAction::to_json() const {
  ordered_json j;
  j["edges"] = edges;
  ordered_json err = ordered_json::object();
  for (const auto& [e, seq] : errors) err[e] = seq;
  j["errors"] = err;
  ordered_json modes = ordered_json::object();
  for (const auto& [e, m] : claim_mode) modes[e] = claim_mode_name(m);
  j["claim_mode"] = modes;
  return j;
}

namespace {

std::pair<int64_t, int64_t> rate_parts(const SimulationTrace& t) {
  const int64_t uses = t.data_uses + t.overhead_uses;
  const int64_t decoded = t.all_correct ? t.symbols_per_round * (t.data_uses / t.uses_per_round) : 0;
  return {decoded, uses};
}

}  // namespace

double SimulationTrace::empirical_rate() const {
  auto [decoded, uses] = rate_parts(*this);
  if (uses == 0) return 0;
  return static_cast<double>(decoded) / static_cast<double>(uses);
}

std::string SimulationTrace::rate_fraction() const {
  auto [decoded, uses] = rate_parts(*this);
  if (uses == 0 || decoded == 0) return "0";
  const int64_t g = std::gcd(decoded, uses);
  return std::to_string(decoded / g) + "/" + std::to_string(uses / g);
}

ordered_json SimulationTrace::summary_json() const {
  ordered_json j;
  j["protocol"] = protocol;
  j["instance"] = instance;
  j["z"] = z;
  j["q"] = q;
  j["seed"] = seed;
  j["rounds"] = data_uses / uses_per_round;
  j["symbols_per_round"] = symbols_per_round;
  j["data_uses"] = data_uses;
  j["overhead_uses"] = overhead_uses;
  j["claim_events"] = claim_events;
  j["empirical_rate"] = empirical_rate();
  j["rate"] = rate_fraction();
  j["all_correct"] = all_correct;
  j["false_accusation"] = false_accusation;
  j["identified"] = identified;
  if (!note.empty()) j["note"] = note;
  return j;
}

std::string SimulationTrace::jsonl() const {
  std::ostringstream out;
  for (const auto& r : rounds) {
    ordered_json j;
    j["round"] = r.round;
    j["tx"] = r.tx;
    j["adversary_edges"] = r.adversary_edges;
    j["errors"] = r.errors;
    j["feedback"] = r.feedback;
    j["claims"] = r.claims;
    j["identified"] = r.identified;
    j["decoded"] = r.decoded ? ordered_json(*r.decoded) : ordered_json(nullptr);
    j["branch"] = r.branch;
    j["ok"] = r.ok;
    out << j.dump() << '\n';
  }
  return out.str();
}

ordered_json SweepSummary::to_json() const {
  ordered_json j;
  j["fixture"] = fixture;
  j["z"] = z;
  j["q"] = q;
  j["rounds"] = rounds;
  j["adversaries_tested"] = adversaries_tested;
  j["min_rate"] = min_rate;
  j["all_correct"] = all_correct;
  j["false_accusation"] = false_accusation;
  j["max_claim_events"] = max_claim_events;
  if (!first_failure.empty()) j["first_failure"] = first_failure;
  return j;
}

void SweepSummary::absorb(const SimulationTrace& t, const AdversaryAction& adv) {
  double rate = t.empirical_rate();
  min_rate = adversaries_tested == 0 ? rate : std::min(min_rate, rate);
  ++adversaries_tested;
  max_claim_events = std::max(max_claim_events, t.claim_events);
  bool bad = !t.all_correct || t.false_accusation;
  all_correct = all_correct && t.all_correct;
  false_accusation = false_accusation || t.false_accusation;
  if (bad && first_failure.empty()) first_failure = adv.to_json().dump();
}

std::vector<Block> nonzero_blocks(uint32_t q, int length) {
  std::vector<Block> out;
  Block b(length, 0);
  while (true) {
    int i = 0;
    while (i < length && b[i] == q - 1) b[i++] = 0;
    if (i == length) break;
    ++b[i];
    out.push_back(b);
  }
  return out;
}

int64_t block_space(uint32_t q, int length, int64_t cap) {
  int64_t v = 1;
  for (int i = 0; i < length; ++i) {
    v *= q;
    if (v - 1 > cap) return cap + 1;
  }
  return v - 1;
}

}  // namespace nec

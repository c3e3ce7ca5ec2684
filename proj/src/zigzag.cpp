#include "nec/zigzag.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include "nec/code.hpp"
#include "nec/error.hpp"

namespace nec {

int64_t ZigZagSpec::count_between(int i, int j) const {
  int64_t s = 0;
  for (int u = i + 1; u <= j; ++u) s += count(u);
  return s;
}

int64_t ZigZagSpec::bundle_capacity(int i) const {
  const auto& caps = forward.at(i - 1);
  return std::accumulate(caps.begin(), caps.end(), int64_t{0});
}

void ZigZagSpec::validate() const {
  if (feedback.empty()) fail(ErrorKind::InvalidInput, "invalid-zigzag", "at least one layer required");
  if (forward.size() != feedback.size() + 1)
    fail(ErrorKind::InvalidInput, "invalid-zigzag",
         std::to_string(feedback.size()) + " layers need " + std::to_string(feedback.size() + 1) + " forward bundles");
  for (size_t i = 0; i < forward.size(); ++i) {
    if (forward[i].empty())
      fail(ErrorKind::InvalidInput, "invalid-zigzag", "forward bundle " + std::to_string(i + 1) + " is empty");
    for (int64_t c : forward[i])
      if (c < 1) fail(ErrorKind::InvalidInput, "invalid-zigzag", "capacities must be positive");
  }
  for (int m : feedback)
    if (m < 0) fail(ErrorKind::InvalidInput, "invalid-zigzag", "negative feedback count");
}

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) out.push_back(cur);
  if (!s.empty() && s.back() == sep) out.emplace_back();
  return out;
}

int64_t parse_int(const std::string& s) {
  try {
    size_t used = 0;
    const long long v = std::stoll(s, &used);
    if (used == s.size()) return v;
  } catch (const std::exception&) {
  }
  fail(ErrorKind::InvalidInput, "invalid-zigzag", "not an integer: '" + s + "'");
}

}  // namespace

ZigZagSpec parse_zigzag(const std::string& text) {
  ZigZagSpec spec;
  bool has_f = false, has_m = false;
  for (const auto& part : split(text, ';')) {
    const auto eq = part.find('=');
    if (eq == std::string::npos) fail(ErrorKind::InvalidInput, "invalid-zigzag", "expected key=value in '" + part + "'");
    const std::string key = part.substr(0, eq), value = part.substr(eq + 1);
    if (key == "F") {
      has_f = true;
      for (const auto& bundle : split(value, '/')) {
        spec.forward.emplace_back();
        for (const auto& c : split(bundle, ',')) spec.forward.back().push_back(parse_int(c));
      }
    } else if (key == "m") {
      has_m = true;
      for (const auto& c : split(value, ',')) spec.feedback.push_back(static_cast<int>(parse_int(c)));
    } else {
      fail(ErrorKind::InvalidInput, "invalid-zigzag", "unknown key '" + key + "'");
    }
  }
  if (!has_f || !has_m) fail(ErrorKind::InvalidInput, "invalid-zigzag", "need both F= and m=");
  spec.validate();
  return spec;
}

std::string format_zigzag(const ZigZagSpec& spec) {
  std::string s = "F=";
  for (size_t i = 0; i < spec.forward.size(); ++i) {
    if (i) s += "/";
    for (size_t j = 0; j < spec.forward[i].size(); ++j) s += (j ? "," : "") + std::to_string(spec.forward[i][j]);
  }
  s += ";m=";
  for (size_t i = 0; i < spec.feedback.size(); ++i) s += (i ? "," : "") + std::to_string(spec.feedback[i]);
  return s;
}

Network zigzag_network(const ZigZagSpec& spec, const std::vector<int>* keep) {
  spec.validate();
  const int k = spec.layers();
  auto side_b = [&](int i) { return i == 0 ? std::string("s") : "B" + std::to_string(i); };
  auto side_a = [&](int i) { return i == k + 1 ? std::string("t") : "A" + std::to_string(i); };
  std::vector<std::string> nodes{"s"};
  for (int i = 1; i <= k; ++i) {
    nodes.push_back(side_a(i));
    nodes.push_back(side_b(i));
  }
  nodes.push_back("t");
  std::vector<Edge> edges;
  for (int i = 1; i <= k + 1; ++i)
    for (size_t j = 0; j < spec.forward[i - 1].size(); ++j)
      edges.push_back({"f" + std::to_string(i) + "_" + std::to_string(j + 1), side_b(i - 1), side_a(i),
                       Capacity::finite(spec.forward[i - 1][j])});
  for (int i = 1; i <= k; ++i) {
    if (keep && std::find(keep->begin(), keep->end(), i) == keep->end()) continue;
    for (int j = 0; j < spec.feedback[i - 1]; ++j)
      edges.push_back({"w" + std::to_string(i) + "_" + std::to_string(j + 1), side_a(i), side_b(i),
                       Capacity::finite(spec.bundle_capacity(i))});
  }
  for (int i = 1; i <= k; ++i) edges.push_back({"a" + std::to_string(i), side_a(i), side_a(i + 1), Capacity::unbounded()});
  for (int i = 0; i < k; ++i) edges.push_back({"b" + std::to_string(i), side_b(i), side_b(i + 1), Capacity::unbounded()});
  return Network::build(nodes, edges, "s", "t");
}

ZigZagResult zigzag_rate(const ZigZagSpec& spec, int z, const ZigZagOptions& opt) {
  spec.validate();
  const int k = spec.layers();
  if (k > opt.max_layers)
    fail(ErrorKind::GuardLimit, "layer-limit", std::to_string(k) + " layers exceed " + std::to_string(opt.max_layers));
  if (z < 0) fail(ErrorKind::InvalidInput, "invalid-budget", "z must be nonnegative");
  const int64_t wide = 2 * static_cast<int64_t>(z) + 1;

  auto gaps_ok = [&](const std::vector<int>& set) {
    for (size_t j = 0; j < set.size(); ++j) {
      const int next = j + 1 < set.size() ? set[j + 1] : k + 1;
      if (spec.count_between(set[j], next) < wide) return false;
    }
    return true;
  };

  ZigZagResult res;
  res.full_bound = generalized_bound(zigzag_network(spec), z, opt.limits).value;
  // Subsets in order of size, then lexicographically.
  for (int size = 1; size <= k; ++size)
    for_each_combination(k, size, [&](const std::vector<int>& idx) {
      std::vector<int> set;
      for (int i : idx) set.push_back(i + 1);
      ZigZagCandidate c;
      c.layers = set;
      if (size == 1) c.families.push_back("P");
      if (gaps_ok(set)) {
        c.families.push_back("Q");
        if (spec.feedback[set[0] - 1] > z) c.families.push_back("R");
      }
      if (c.families.empty()) return true;
      const Network reduced = zigzag_network(spec, &set);
      c.value = generalized_bound(reduced, z, opt.limits).value;
      if (res.candidates.empty() || c.value > res.rate) {
        res.rate = c.value;
        res.best = set;
      }
      res.candidates.push_back(std::move(c));
      return true;
    });

  bool all_wide = true;
  for (int i = 2; i <= k + 1; ++i) all_wide = all_wide && spec.count(i) >= wide;
  if (all_wide) {
    res.certified_tight = true;
    res.certificate = "all-later-bundles-wide";
  } else {
    for (int u = 1; u <= k && !res.certified_tight; ++u) {
      if (spec.feedback[u - 1] <= z) continue;
      bool later = true;
      for (int j = u + 1; j <= k + 1; ++j) later = later && spec.count(j) >= wide;
      if (later) {
        res.certified_tight = true;
        res.certificate = "strong-feedback-layer-" + std::to_string(u);
      }
    }
  }
  ensure(res.rate <= res.full_bound, "reduced-network bound exceeds the full-network bound");
  return res;
}

nlohmann::ordered_json ZigZagResult::to_json() const {
  nlohmann::ordered_json j;
  j["rate"] = rate;
  j["best"] = best;
  j["full_bound"] = full_bound;
  j["certified_tight"] = certified_tight;
  j["certificate"] = certificate;
  j["candidates"] = nlohmann::ordered_json::array();
  for (const auto& c : candidates)
    j["candidates"].push_back({{"layers", c.layers}, {"families", c.families}, {"value", c.value}});
  return j;
}

}  // namespace nec

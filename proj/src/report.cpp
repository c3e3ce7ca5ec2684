#include "nec/report.hpp"

#include "nec/error.hpp"
#include "nec/feedback_lp.hpp"
#include "nec/protocols.hpp"

namespace nec {
namespace {

BoundResult per_cut(const Network& net, const Cut& cut, int z, BoundKind kind, const BoundLimits& lim) {
  switch (kind) {
    case BoundKind::TwoNode: return two_node_bound(net, cut, z);
    case BoundKind::Singleton: return generalized_singleton(net, cut, z, lim);
    case BoundKind::Bound1: return cutset_bound1(net, cut, z, lim);
    case BoundKind::Bound2: return cutset_bound2_opt(net, cut, z, lim);
    case BoundKind::Generalized: return cut_generalized(net, cut, z, lim);
  }
  ensure(false, "unknown bound kind");
  return {};
}

constexpr BoundKind kKinds[] = {BoundKind::TwoNode, BoundKind::Singleton, BoundKind::Bound1, BoundKind::Bound2,
                                BoundKind::Generalized};

BoundKind kind_by_name(const std::string& name) {
  for (BoundKind k : kKinds)
    if (name == bound_name(k)) return k;
  fail(ErrorKind::InvalidInput, "unknown-bound", name);
}

}  // namespace

nlohmann::ordered_json witness_json(const BoundWitness& w) {
  nlohmann::ordered_json j;
  j["cut"] = w.cut;
  auto put = [&](const char* key, const std::vector<std::string>& v) {
    if (!v.empty()) j[key] = v;
  };
  put("erased_forward", w.erased_forward);
  put("erased_feedback", w.erased_feedback);
  put("singleton_set", w.singleton_set);
  put("z1", w.z1);
  put("z2", w.z2);
  put("w1", w.w1);
  put("w2", w.w2);
  j["adversaries"] = w.adversaries;
  return j;
}

nlohmann::ordered_json bounds_report(const Network& net, int z, const std::vector<std::string>& drawn_cut,
                                     const BoundLimits& lim, bool* guard_hit) {
  nlohmann::ordered_json j;
  auto guarded = [&](auto&& compute) -> nlohmann::ordered_json {
    try {
      const BoundResult r = compute();
      return {{"value", r.value}, {"witness", witness_json(r.witness)}};
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::GuardLimit) throw;
      if (guard_hit) *guard_hit = true;
      return {{"error", e.what()}};
    }
  };
  const auto mc = min_cut_value(net, lim.nodes);
  j["min_cut"] = mc ? nlohmann::ordered_json(*mc) : nlohmann::ordered_json("unbounded");
  nlohmann::ordered_json all = nlohmann::ordered_json::object();
  for (BoundKind k : kKinds) all[bound_name(k)] = guarded([&] { return min_over_cuts(net, z, k, lim); });
  j["min_over_cuts"] = all;
  if (!drawn_cut.empty()) {
    const Cut cut = cut_from_ids(net, drawn_cut);
    nlohmann::ordered_json drawn = nlohmann::ordered_json::object();
    drawn["cut"] = drawn_cut;
    for (BoundKind k : kKinds) drawn[bound_name(k)] = guarded([&] { return per_cut(net, cut, z, k, lim); });
    j["drawn_cut"] = drawn;
  }
  return j;
}

std::vector<ExpectedCheck> check_fixture(const Fixture& f, const BoundLimits& lim) {
  std::vector<ExpectedCheck> out;
  for (const auto& [name, expected] : f.expected) {
    ExpectedCheck c{name, expected, 0};
    if (name == "min_cut") {
      c.actual = min_cut_value(f.network, lim.nodes).value_or(-1);
    } else if (name == "generalized") {
      c.actual = generalized_bound(f.network, f.z, lim).value;
    } else if (name == "lp_h") {
      const auto lp = min_feedback_capacity(FeedbackLpInstance::from_four_node(four_node_instance(f.network, f.z)));
      ensure(boost::multiprecision::denominator(lp.h) == 1, "fractional h on " + f.id);
      c.actual = static_cast<int64_t>(boost::multiprecision::numerator(lp.h));
    } else {
      const BoundKind k = kind_by_name(name);
      c.actual = f.drawn_cut.empty() ? min_over_cuts(f.network, f.z, k, lim).value
                                     : per_cut(f.network, cut_from_ids(f.network, f.drawn_cut), f.z, k, lim).value;
    }
    out.push_back(c);
  }
  return out;
}

}  // namespace nec

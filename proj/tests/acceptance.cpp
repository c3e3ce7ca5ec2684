// One PASS/FAIL line per acceptance criterion. Exit status is the number of failed criteria.
#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>

#include "nec/adversary.hpp"
#include "nec/bounds.hpp"
#include "nec/code.hpp"
#include "nec/error.hpp"
#include "nec/feedback_lp.hpp"
#include "nec/fixtures.hpp"
#include "nec/greedy.hpp"
#include "nec/protocols.hpp"
#include "nec/strategies.hpp"

using namespace nec;

namespace {

using Clock = std::chrono::steady_clock;

// Tolerances: exact integers for 1-7, 11-14; rate constant for 10 pinned below; per-fixture sweep time limit for 9.
constexpr double kSweepSeconds = 600.0;
constexpr double kFig11RateConstant = 189.0;  // 7 symbols times the 27-use claim window
constexpr int kDominanceCutsize = 32;          // fig9 bound1 enumerates 26 crossing edges

int failures = 0;

void report(int id, bool ok, const std::string& detail, double seconds) {
  std::printf("%s criterion %d: %s (%.1f s)\n", ok ? "PASS" : "FAIL", id, detail.c_str(), seconds);
  std::fflush(stdout);
  if (!ok) ++failures;
}

void criterion(int id, const std::function<bool(std::ostringstream&)>& body) {
  const auto start = Clock::now();
  std::ostringstream detail;
  bool ok = false;
  try {
    ok = body(detail);
  } catch (const std::exception& e) {
    detail << " exception: " << e.what();
  }
  report(id, ok, detail.str(), std::chrono::duration<double>(Clock::now() - start).count());
}

Cut drawn(const Fixture& f) { return cut_from_ids(f.network, f.drawn_cut); }

bool expect(std::ostringstream& d, const std::string& what, int64_t got, int64_t want) {
  d << what << "=" << got << (got == want ? "" : " (want " + std::to_string(want) + ")") << "; ";
  return got == want;
}

double seconds_since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

}  // namespace

int main() {
  criterion(1, [](std::ostringstream& d) {
    const Fixture& f = fixture("fig4");
    bool ok = expect(d, "fig4 two_node", two_node_bound(f.network, drawn(f), 2).value, 22);
    return expect(d, "singleton", generalized_singleton(f.network, drawn(f), 2).value, 2) && ok;
  });

  criterion(2, [](std::ostringstream& d) {
    const Fixture& f = fixture("fig5a");
    bool ok = expect(d, "fig5a singleton", generalized_singleton(f.network, drawn(f), 2).value, 20);
    return expect(d, "bound1", cutset_bound1(f.network, drawn(f), 2).value, 4) && ok;
  });

  criterion(3, [](std::ostringstream& d) {
    const Fixture& f = fixture("fig5b");
    bool ok = expect(d, "fig5b singleton", generalized_singleton(f.network, drawn(f), 2).value, 16);
    return expect(d, "bound1", cutset_bound1(f.network, drawn(f), 2).value, 15) && ok;
  });

  criterion(4, [](std::ostringstream& d) {
    const Fixture& f = fixture("fig6");
    bool ok = expect(d, "fig6 min_cut", min_cut_value(f.network).value_or(-1), 37);
    ok = expect(d, "singleton", generalized_singleton(f.network, drawn(f), 4).value, 27) && ok;
    return expect(d, "bound1", cutset_bound1(f.network, drawn(f), 4).value, 19) && ok;
  });

  criterion(5, [](std::ostringstream& d) {
    const Fixture& f = fixture("fig7");
    bool ok = expect(d, "fig7 bound1", cutset_bound1(f.network, drawn(f), 3).value, 9);
    return expect(d, "bound2_opt", cutset_bound2_opt(f.network, drawn(f), 3).value, 8) && ok;
  });

  criterion(6, [](std::ostringstream& d) {
    bool ok = true;
    for (auto [id, z, want] : {std::tuple{"fig8", 1, 2}, std::tuple{"fig9", 1, 8}, std::tuple{"fig10", 1, 4},
                               std::tuple{"fig11", 2, 7}})
      ok = expect(d, std::string(id) + " generalized", generalized_bound(fixture(id).network, z).value, want) && ok;
    return ok;
  });

  criterion(7, [](std::ostringstream& d) {
    bool ok = true;
    for (auto [id, cz, h] : {std::tuple{"fig14a", 6, 3}, std::tuple{"fig14b", 9, 5}}) {
      const Fixture& f = fixture(id);
      ok = expect(d, std::string(id) + " C_z", generalized_bound(f.network, f.z).value, cz) && ok;
      const LpResult lp = min_feedback_capacity(FeedbackLpInstance::from_four_node(four_node_instance(f.network, f.z)));
      d << "h=" << rational_string(lp.h) << "; ";
      ok = ok && lp.h == h;
    }
    const std::vector<int64_t> caps{6, 6, 4, 4, 3, 1, 1, 1, 1, 1, 1};
    const ConditionCheck check =
        check_conditions(caps, std::vector<int64_t>{5, 5, 3, 3, 2, 1, 1, 1, 1, 1, 1}, 3, 1, 29 - 9);
    d << "fig14b f=(5,5,3,3,2) conditions " << (check.pass ? "pass" : "fail");
    return ok && check.pass;
  });

  criterion(8, [](std::ostringstream& d) {
    bool ok = true;
    int instances = 0;
    for (int n = 1; n <= 4; ++n)
      for (int m = 0; m <= 1; ++m)
        for (int z = 0; z <= 1; ++z) {
          ++instances;
          const TwoNodeNetwork net{std::vector<int64_t>(n, 1), std::vector<int64_t>(m, 1), z};
          const int oracle = micro_capacity_oracle(net, 2).k;
          const int64_t formula = two_node_bound(net.forward_caps, m, z).value;
          if (oracle > formula || (m == 0 && oracle != formula)) {
            ok = false;
            d << "n=" << n << " m=" << m << " z=" << z << ": oracle " << oracle << " vs formula " << formula << "; ";
          }
        }
    d << instances << " instances over GF(2)";
    return ok;
  });

  criterion(9, [](std::ostringstream& d) {
    bool ok = true;
    auto record = [&](const std::string& name, const SweepSummary& s, Clock::time_point t) {
      const double secs = seconds_since(t);
      d << name << ": " << s.adversaries_tested << " adversaries, correct=" << s.all_correct
        << " false_accusation=" << s.false_accusation << " " << static_cast<int>(secs) << "s; ";
      if (!s.first_failure.empty()) d << "first failure " << s.first_failure << "; ";
      ok = ok && s.all_correct && !s.false_accusation && secs < kSweepSeconds;
    };
    auto t = Clock::now();
    record("fig8 n=2 GF(5) every message", sweep_example_strategy(fig8_strategy(2, 5), 1, 1, 30000, true), t);
    t = Clock::now();
    const FourNodeSetup fig11 = prepare_four_node(four_node_instance(fixture("fig11").network, 2), 13, {1, 1, 1}, 1);
    record("fig11 GF(13)", sweep_four_node(fig11, 3, 1), t);
    t = Clock::now();
    const FourNodeSetup fig14a = prepare_four_node(four_node_instance(fixture("fig14a").network, 2), 11, {1, 1, 1}, 1);
    record("fig14a GF(11)", sweep_four_node(fig14a, 3, 1), t);
    return ok;
  });

  criterion(10, [](std::ostringstream& d) {
    bool ok = true;
    const FourNodeSetup fig11 = prepare_four_node(four_node_instance(fixture("fig11").network, 2), 13, {1, 1, 1}, 1);
    d << "fig11 c=" << kFig11RateConstant << ":";
    for (int rounds : {3, 10, 30, 100}) {
      const double honest = simulate_four_node(fig11, {}, {rounds, 1, false}).empirical_rate();
      const SweepSummary attacked = random_sweep_four_node(fig11, rounds, 10, 7);
      const double worst = std::min(honest, attacked.min_rate);
      d << " R=" << rounds << " rate " << worst;
      ok = ok && attacked.all_correct && worst >= 7.0 - kFig11RateConstant / rounds && worst <= 7.0;
    }
    d << "; fig8:";
    for (int n = 2; n <= 6; ++n) {
      const SimulationTrace tr = run_example_strategy(fig8_strategy(n), {}, {5, 1, false});
      std::ostringstream want;
      const int num = 2 * n - 2, den = n, g = std::gcd(num, den);
      want << num / g << "/" << den / g;
      d << " n=" << n << " " << tr.rate_fraction();
      ok = ok && tr.all_correct && tr.rate_fraction() == want.str();
    }
    return ok;
  });

  criterion(11, [](std::ostringstream& d) {
    const BlockCode code = make_mds(Field(13), 11, 7);
    int minors = 0;
    for_each_combination(11, 7, [&](const std::vector<int>&) {
      ++minors;
      return true;
    });
    bool ok = all_minors_invertible(code) && minors == 330;
    d << "(11,7) over GF(13): " << minors << " minors " << (ok ? "invertible" : "NOT all invertible") << "; ";
    std::mt19937_64 rng(11);
    int random_ok = 0;
    for (int t = 0; t < 20; ++t) {
      const int n = 2 + static_cast<int>(rng() % 11), k = 1 + static_cast<int>(rng() % n);
      const uint32_t q = smallest_prime_above(static_cast<uint32_t>(n) + static_cast<uint32_t>(rng() % 8));
      if (all_minors_invertible(make_mds(Field(q), n, k))) ++random_ok;
    }
    d << random_ok << "/20 random (N<=12,k) codes MDS";
    return ok && random_ok == 20;
  });

  criterion(12, [](std::ostringstream& d) {
    const Field f(5);
    int verified = 0;
    for (uint64_t seed = 0; seed < 20; ++seed) {
      const Fig8Transfer t = fig8_transfer(random_fig8_linear_code(f, 3, 2, seed));
      const auto cert = linear_insufficiency_certificate(f, t.gt, t.m1, t.m2, 3, 2);
      if (!cert.x.empty() && verify_certificate(f, t.gt, t.m1, t.m2, cert)) ++verified;
    }
    bool declined = false;
    try {
      const Fig8Transfer t = fig8_transfer(random_fig8_linear_code(f, 4, 3, 0));
      linear_insufficiency_certificate(f, t.gt, t.m1, t.m2, 4, 3);
    } catch (const Error& e) {
      declined = e.kind() == ErrorKind::Precondition;
    }
    d << verified << "/20 certificates verified (k=3, n=2, GF(5)); 3k=4n " << (declined ? "declined" : "NOT declined");
    return verified == 20 && declined;
  });

  criterion(13, [](std::ostringstream& d) {
    const BoundLimits lim{kDominanceCutsize, 20};
    int networks = 0, violations = 0;
    std::string first;
    auto check = [&](const std::string& name, const Network& net, int max_z) {
      ++networks;
      int64_t prev[5] = {0, 0, 0, 0, 0};
      for (int z = 0; z <= max_z; ++z) {
        const int64_t two = min_over_cuts(net, z, BoundKind::TwoNode, lim).value;
        const int64_t sg = min_over_cuts(net, z, BoundKind::Singleton, lim).value;
        const int64_t b1 = min_over_cuts(net, z, BoundKind::Bound1, lim).value;
        const int64_t b2 = min_over_cuts(net, z, BoundKind::Bound2, lim).value;
        const int64_t gen = generalized_bound(net, z, lim).value;
        const int64_t mc = min_cut_value(net).value_or(INT64_MAX);
        const int64_t now[5] = {two, sg, b1, b2, gen};
        bool good = gen <= b2 && b2 <= sg && gen <= b1 && b1 <= sg && sg <= mc && two <= mc;
        for (int i = 0; i < 5 && z > 0; ++i) good = good && now[i] <= prev[i];
        std::copy(now, now + 5, prev);
        if (!good) {
          ++violations;
          if (first.empty()) first = name + " z=" + std::to_string(z);
        }
      }
    };
    for (const auto& f : all_fixtures()) check(f.id, f.network, f.z);
    for (uint64_t seed = 0; seed < 100; ++seed) check("random " + std::to_string(seed), random_network(seed, 8, 5), 2);
    d << networks << " networks, " << violations << " violations";
    if (!first.empty()) d << ", first at " << first;
    return violations == 0;
  });

  criterion(14, [](std::ostringstream& d) {
    const Network& net = fixture("fig9").network;
    const CorrectionPlan plan = greedy_intermediate_ec(net, {"Y3", "Y4"});
    bool ok = plan.steps.size() == 2;
    std::vector<int64_t> used(net.num_edges(), 0);
    for (const auto& s : plan.steps) {
      d << s.node << " (" << s.mds_length() << "," << s.mds_dimension() << ") ";
      ok = ok && s.mds_length() == 4 && s.mds_dimension() == 2;
      for (const auto* paths : {&s.in_paths, &s.out_paths})
        for (const auto& p : *paths)
          for (const auto& e : p) ++used[net.edge_index(e)];
    }
    bool disjoint = true;
    for (int e = 0; e < net.num_edges(); ++e) disjoint = disjoint && used[e] <= net.cap(e).value();
    d << (disjoint ? "disjoint" : "OVERLAPPING") << " unit subgraphs; ";
    const SweepSummary s = sweep_example_strategy(fig9_strategy(), 1, 1);
    d << "fig9 strategy " << s.adversaries_tested << " single-link adversaries correct=" << s.all_correct;
    return ok && disjoint && s.all_correct;
  });

  std::printf("%d criteria failed\n", failures);
  return failures;
}

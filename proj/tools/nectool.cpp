#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "nec/adversary.hpp"
#include "nec/bounds.hpp"
#include "nec/error.hpp"
#include "nec/feedback_lp.hpp"
#include "nec/fixtures.hpp"
#include "nec/greedy.hpp"
#include "nec/protocols.hpp"
#include "nec/report.hpp"
#include "nec/strategies.hpp"
#include "nec/zigzag.hpp"

using namespace nec;
using json = nlohmann::ordered_json;

namespace {

struct Common {
  std::string fixture_id, network_file, two_node, format = "json";
  int z = -1;
  uint32_t q = 0;
  int rounds = 3;
  uint64_t seed = 1;
  std::string adversary = "exhaustive";
  int limit_nodes = 20, limit_cutsize = 24;
  bool timing = false;
};

struct Source {
  Network net;
  int z = 0;
  std::string name;
  std::vector<std::string> drawn_cut;
};

std::vector<int64_t> parse_caps(const std::string& s) {
  std::vector<int64_t> out;
  std::stringstream in(s);
  std::string part;
  while (std::getline(in, part, ','))
    if (!part.empty()) {
      try {
        out.push_back(std::stoll(part));
      } catch (const std::exception&) {
        fail(ErrorKind::InvalidInput, "invalid-argument", "not an integer: '" + part + "'");
      }
    }
  return out;
}

// "forward caps/feedback caps", e.g. "1,1,1,1,1/1".
TwoNodeNetwork parse_two_node(const std::string& s, int z) {
  const auto slash = s.find('/');
  TwoNodeNetwork net;
  net.forward_caps = parse_caps(s.substr(0, slash));
  if (slash != std::string::npos) net.feedback_caps = parse_caps(s.substr(slash + 1));
  net.z = z;
  net.validate();
  return net;
}

Source load(const Common& c) {
  if (!c.fixture_id.empty() == !c.network_file.empty())
    fail(ErrorKind::InvalidInput, "usage", "give exactly one of --fixture or --network");
  Source src;
  if (!c.fixture_id.empty()) {
    const Fixture& f = fixture(c.fixture_id);
    src = {f.network, c.z >= 0 ? c.z : f.z, f.id, f.drawn_cut};
  } else {
    std::ifstream in(c.network_file);
    if (!in) fail(ErrorKind::InvalidInput, "unreadable-file", c.network_file);
    std::stringstream buf;
    buf << in.rdbuf();
    if (c.z < 0) fail(ErrorKind::InvalidInput, "usage", "--z is required with --network");
    src = {parse_network(buf.str()), c.z, c.network_file, {}};
  }
  return src;
}

BoundLimits limits(const Common& c) { return {c.limit_cutsize, c.limit_nodes}; }

void print_text(const json& j, const std::string& prefix, std::ostream& out) {
  if (j.is_object()) {
    for (auto it = j.begin(); it != j.end(); ++it)
      print_text(it.value(), prefix.empty() ? it.key() : prefix + "." + it.key(), out);
  } else if (j.is_array() && std::any_of(j.begin(), j.end(), [](const json& x) { return x.is_structured(); })) {
    for (size_t i = 0; i < j.size(); ++i) print_text(j[i], prefix + "[" + std::to_string(i) + "]", out);
  } else {
    out << prefix << ": " << (j.is_string() ? j.get<std::string>() : j.dump()) << "\n";
  }
}

void emit(const Common& c, json report, std::chrono::steady_clock::time_point start) {
  if (c.timing)
    report["elapsed_ms"] =
        std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start).count();
  if (c.format == "text")
    print_text(report, "", std::cout);
  else
    std::cout << report.dump(2) << "\n";
}

json cmd_bounds(const Common& c, int& status) {
  const Source src = load(c);
  bool guard = false;
  json j;
  j["network"] = src.name;
  j["z"] = src.z;
  j.update(bounds_report(src.net, src.z, src.drawn_cut, limits(c), &guard));
  if (guard) status = 3;
  return j;
}

json cmd_simulate(const Common& c, int64_t value_cap, int runs, const std::string& trace_file) {
  json j;
  j["seed"] = c.seed;
  j["adversary"] = c.adversary;
  if (!c.two_node.empty()) {
    if (c.z < 0) fail(ErrorKind::InvalidInput, "usage", "--z is required with --two-node");
    if (c.adversary != "exhaustive")
      fail(ErrorKind::InvalidInput, "usage", "two-node sweeps support --adversary exhaustive only");
    const TwoNodeNetwork net = parse_two_node(c.two_node, c.z);
    const uint32_t q = c.q ? c.q : two_node_field(net);
    j["protocol"] = "two-node";
    j["summary"] = sweep_two_node(net, q, c.rounds, c.seed, value_cap).to_json();
    return j;
  }
  if (c.fixture_id == "fig8" || c.fixture_id == "fig9" || c.fixture_id == "fig10") {
    if (c.adversary != "exhaustive")
      fail(ErrorKind::InvalidInput, "usage", "example strategies support --adversary exhaustive only");
    const ExampleStrategy st = example_strategy(c.fixture_id, c.seed);
    j["protocol"] = "example-strategy";
    j["description"] = st.description;
    j["summary"] = sweep_example_strategy(st, c.rounds, c.seed, value_cap).to_json();
    return j;
  }
  const Source src = load(c);
  const FourNodeInstance inst = four_node_instance(src.net, src.z);
  std::string warning;
  const auto degrees = min_feedback_capacity(FeedbackLpInstance::from_four_node(inst)).integral_degrees(&warning);
  const FourNodeSetup setup = prepare_four_node(inst, c.q ? c.q : 13, degrees, c.seed);
  j["protocol"] = "four-node";
  j["q"] = setup.field.q();
  j["degrees"] = degrees;
  if (!warning.empty()) j["warning"] = warning;
  j["forward_code"] = setup.code.construction;
  if (c.adversary == "exhaustive") {
    j["summary"] = sweep_four_node(setup, c.rounds, c.seed, value_cap).to_json();
  } else if (c.adversary == "random") {
    j["summary"] = random_sweep_four_node(setup, c.rounds, runs, c.seed).to_json();
  } else {
    fail(ErrorKind::InvalidInput, "usage", "--adversary must be exhaustive or random");
  }
  if (!trace_file.empty()) {
    SimOptions opt{c.rounds, c.seed, true};
    const SimulationTrace honest = simulate_four_node(setup, AdversaryAction{}, opt);
    std::ofstream(trace_file) << honest.jsonl();
  }
  return j;
}

json cmd_oracle(const Common& c) {
  json j;
  OracleResult r;
  if (!c.two_node.empty()) {
    if (c.z < 0) fail(ErrorKind::InvalidInput, "usage", "--z is required with --two-node");
    const TwoNodeNetwork net = parse_two_node(c.two_node, c.z);
    j["network"] = "two-node " + c.two_node;
    j["z"] = c.z;
    j["q"] = c.q ? c.q : 2;
    r = micro_capacity_oracle(net, c.q ? c.q : 2);
  } else {
    const Source src = load(c);
    j["network"] = src.name;
    j["z"] = src.z;
    j["q"] = c.q ? c.q : 2;
    r = micro_capacity_oracle(src.net, src.z, c.q ? c.q : 2);
  }
  j["k"] = r.k;
  j["max_codebook"] = r.max_codebook;
  j["mode"] = r.mode;
  return j;
}

json cmd_lp(const Common& c, bool free_bt, bool grid) {
  const Source src = load(c);
  const auto lp = FeedbackLpInstance::from_four_node(four_node_instance(src.net, src.z));
  LpOptions opt;
  opt.free_bt = free_bt;
  const LpResult r = min_feedback_capacity(lp, opt);
  json j;
  j["network"] = src.name;
  j["z"] = src.z;
  j["cz"] = lp.cz;
  j["free_bt"] = free_bt;
  j.update(r.to_json());
  std::string warning;
  j["integral_degrees"] = r.integral_degrees(&warning);
  if (!warning.empty()) j["warning"] = warning;
  if (grid) {
    json g = json::array();
    for (const auto& opt_g : grid_feedback_optimum(lp, 8, 2'000'000, opt))
      g.push_back({{"denominator", opt_g.denominator}, {"objective", rational_string(opt_g.objective)}});
    j["grid"] = g;
  }
  return j;
}

json cmd_greedy(const Common& c, const std::string& candidates) {
  const Source src = load(c);
  std::vector<std::string> ids;
  std::stringstream in(candidates);
  std::string part;
  while (std::getline(in, part, ','))
    if (!part.empty()) ids.push_back(part);
  json j;
  j["network"] = src.name;
  j["candidates"] = ids;
  j.update(greedy_intermediate_ec(src.net, ids).to_json(src.net));
  return j;
}

json cmd_fixtures(const Common& c, bool check, int& status) {
  json list = json::array();
  for (const auto& f : all_fixtures()) {
    json e;
    e["id"] = f.id;
    e["z"] = f.z;
    e["expected"] = f.expected;
    if (!f.note.empty()) e["note"] = f.note;
    if (check) {
      json res = json::object();
      for (const auto& r : check_fixture(f, limits(c))) {
        res[r.name] = {{"expected", r.expected}, {"actual", r.actual}, {"ok", r.ok()}};
        if (!r.ok()) status = 1;
      }
      e["check"] = res;
    }
    list.push_back(e);
  }
  return {{"fixtures", list}};
}

json cmd_certify(const Common& c, int k, int n) {
  const Field f(c.q ? c.q : 5);
  const NetworkCode code = random_fig8_linear_code(f, k, n, c.seed);
  const Fig8Transfer t = fig8_transfer(code);
  const InsufficiencyCertificate cert = linear_insufficiency_certificate(f, t.gt, t.m1, t.m2, k, n);
  json j;
  j["seed"] = c.seed;
  j["q"] = f.q();
  j["k"] = k;
  j["n"] = n;
  j["kind"] = cert.kind;
  j["rank_m1"] = cert.rank_m1;
  j["rank_m2"] = cert.rank_m2;
  if (!cert.deficient.empty()) j["deficient"] = cert.deficient;
  j["x"] = cert.x;
  j["e"] = cert.e;
  j["verified"] = verify_certificate(f, t.gt, t.m1, t.m2, cert);
  return j;
}

json cmd_zigzag(const Common& c, const std::string& spec_text, int max_layers) {
  if (c.z < 0) fail(ErrorKind::InvalidInput, "usage", "--z is required");
  const ZigZagSpec spec = parse_zigzag(spec_text);
  ZigZagOptions opt;
  opt.max_layers = max_layers;
  opt.limits = limits(c);
  json j;
  j["spec"] = format_zigzag(spec);
  j["z"] = c.z;
  j.update(zigzag_rate(spec, c.z, opt).to_json());
  return j;
}

int exit_code(ErrorKind k) {
  switch (k) {
    case ErrorKind::InvalidInput:
    case ErrorKind::Precondition: return 2;
    case ErrorKind::GuardLimit: return 3;
    case ErrorKind::Invariant: return 4;
    case ErrorKind::Infeasible: return 1;
  }
  return 4;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Error-correction capacity toolkit for networks with adversarial links"};
  app.require_subcommand(1);
  Common c;
  auto shared = [&](CLI::App* sub, bool network_flags) {
    sub->add_option("--format", c.format, "json or text")->check(CLI::IsMember({"json", "text"}));
    sub->add_flag("--timing", c.timing, "add elapsed_ms to the report");
    if (!network_flags) return;
    sub->add_option("--fixture", c.fixture_id, "fixture id");
    sub->add_option("--network", c.network_file, "network JSON file");
    sub->add_option("--z", c.z, "adversary budget (fixture default)");
    sub->add_option("--limit-nodes", c.limit_nodes, "cut enumeration node limit");
    sub->add_option("--limit-cutsize", c.limit_cutsize, "crossing-edge enumeration limit");
  };

  auto* bounds = app.add_subcommand("bounds", "all cut-set bounds for a network");
  shared(bounds, true);

  auto* simulate = app.add_subcommand("simulate", "protocol sweep under adversaries");
  shared(simulate, true);
  int64_t value_cap = 5000;
  int runs = 100;
  std::string trace_file;
  simulate->add_option("--two-node", c.two_node, "two-node network as forward caps/feedback caps, e.g. 1,1,1,1,1/1");
  simulate->add_option("--q", c.q, "field size (four-node default 13)");
  simulate->add_option("--rounds", c.rounds, "rounds per run");
  simulate->add_option("--seed", c.seed, "seed");
  simulate->add_option("--adversary", c.adversary, "exhaustive or random");
  simulate->add_option("--value-cap", value_cap, "error values enumerated per support before sampling");
  simulate->add_option("--runs", runs, "random adversary runs");
  simulate->add_option("--trace", trace_file, "write the adversary-free run as JSON lines");

  auto* oracle = app.add_subcommand("oracle", "micro capacity search at block length 1");
  shared(oracle, true);
  oracle->add_option("--two-node", c.two_node, "two-node network as forward caps/feedback caps");
  oracle->add_option("--q", c.q, "field size (default 2)");

  auto* lp = app.add_subcommand("lp", "minimum feedback capacity on a four-node network");
  shared(lp, true);
  bool free_bt = false, grid = false;
  lp->add_flag("--free-bt", free_bt, "B->t degrees as variables instead of fixed");
  lp->add_flag("--grid", grid, "cross-check against rational grids up to denominator 8");

  auto* greedy = app.add_subcommand("greedy", "greedy intermediate error-correction plan");
  shared(greedy, true);
  std::string candidates;
  greedy->add_option("--candidates", candidates, "comma-separated node ids")->required();

  auto* fixtures = app.add_subcommand("fixtures", "list fixtures and expected values");
  shared(fixtures, false);
  bool check = false;
  fixtures->add_flag("--check", check, "recompute every expected value");
  fixtures->add_option("--limit-nodes", c.limit_nodes, "cut enumeration node limit");
  fixtures->add_option("--limit-cutsize", c.limit_cutsize, "crossing-edge enumeration limit");

  auto* certify = app.add_subcommand("certify-linear", "insufficiency certificate for a random linear code on fig8");
  shared(certify, false);
  int k = 3, n = 2;
  certify->add_option("--k", k, "message symbols");
  certify->add_option("--n", n, "rounds");
  certify->add_option("--q", c.q, "field size (default 5)");
  certify->add_option("--seed", c.seed, "seed");

  auto* zigzag = app.add_subcommand("zigzag", "achievable rate on a non-overlapping zig-zag network");
  shared(zigzag, false);
  std::string spec_text;
  int max_layers = 6;
  zigzag->add_option("--spec", spec_text, "e.g. F=2,2,2/1,1,1,1,1;m=1")->required();
  zigzag->add_option("--z", c.z, "adversary budget")->required();
  zigzag->add_option("--max-layers", max_layers, "layer guard");
  zigzag->add_option("--limit-nodes", c.limit_nodes, "cut enumeration node limit");
  zigzag->add_option("--limit-cutsize", c.limit_cutsize, "crossing-edge enumeration limit");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  const auto start = std::chrono::steady_clock::now();
  int status = 0;
  try {
    json report;
    if (*bounds) report = cmd_bounds(c, status);
    if (*simulate) {
      report = cmd_simulate(c, value_cap, runs, trace_file);
      if (!report["summary"]["all_correct"].get<bool>()) status = 4;
    }
    if (*oracle) report = cmd_oracle(c);
    if (*lp) report = cmd_lp(c, free_bt, grid);
    if (*greedy) report = cmd_greedy(c, candidates);
    if (*fixtures) report = cmd_fixtures(c, check, status);
    if (*certify) report = cmd_certify(c, k, n);
    if (*zigzag) report = cmd_zigzag(c, spec_text, max_layers);
    emit(c, report, start);
  } catch (const Error& e) {
    json err{{"error", e.code()}, {"detail", e.what()}};
    std::cout << err.dump(2) << "\n";
    return exit_code(e.kind());
  }
  return status;
}

#include <algorithm>
#include <random>

#include "nec/bounds.hpp"
#include "nec/error.hpp"
#include "nec/protocols.hpp"

namespace nec {
namespace {

std::string fwd_id(int i) { return "f" + std::to_string(i + 1); }
std::string fb_id(int i) { return "b" + std::to_string(i + 1); }

int64_t ceil_div(int64_t a, int64_t b) { return (a + b - 1) / b; }

Block add_blocks(const Field& f, Block a, const Block& e) {
  if (e.empty()) return a;
  if (e.size() != a.size()) fail(ErrorKind::InvalidInput, "layout-mismatch", "error block length");
  for (size_t i = 0; i < a.size(); ++i) a[i] = f.add(a[i], e[i]);
  return a;
}

// Claim relayed source -> sink: (mask over forward links, copy of the sink's word).
struct TwoNodeClaim {
  std::vector<Sym> mask;
  std::vector<Sym> copy;
  Block flat() const {
    Block b = mask;
    b.insert(b.end(), copy.begin(), copy.end());
    return b;
  }
};

}  // namespace

uint32_t two_node_field(const TwoNodeNetwork& net) {
  int64_t total = 0;
  for (auto c : net.forward_caps) total += c;
  return smallest_prime_above(static_cast<uint32_t>(total));
}

SimulationTrace simulate_two_node(const TwoNodeNetwork& net, uint32_t q, const AdversaryAction& adv,
                                  const SimOptions& opt) {
  net.validate();
  adv.validate(net.z);
  const int n = static_cast<int>(net.forward_caps.size());
  const int m = static_cast<int>(net.feedback_caps.size());
  const int z = net.z;
  for (const auto& e : adv.edges) {
    bool known = false;
    for (int i = 0; i < n; ++i) known = known || e == fwd_id(i);
    for (int i = 0; i < m; ++i) known = known || e == fb_id(i);
    if (!known) fail(ErrorKind::InvalidInput, "unknown-edge", e);
  }

  SimulationTrace tr;
  tr.protocol = "two-node";
  tr.instance = "two-node n=" + std::to_string(n) + " m=" + std::to_string(m);
  tr.z = z;
  tr.q = q;
  tr.seed = opt.seed;
  tr.data_uses = opt.rounds;
  const int k = static_cast<int>(two_node_bound(net.forward_caps, m, z).value);
  tr.symbols_per_round = k;
  if (k == 0) {
    tr.note = "n <= 2z: rate 0";
    return tr;
  }

  Field f(q);
  std::vector<LayoutEntry> layout;
  for (int i = 0; i < n; ++i) layout.push_back({fwd_id(i), static_cast<int>(net.forward_caps[i])});
  const BlockCode code = make_mds(f, make_layout(layout), k);
  const ConsistencyChecker checker(code);
  std::vector<int> entry(n);
  for (int i = 0; i < n; ++i) entry[i] = code.entry_of(fwd_id(i));
  const int total = code.length();
  const bool small_feedback = 2 * m <= z;
  int64_t min_fwd = *std::min_element(net.forward_caps.begin(), net.forward_caps.end());
  int64_t feedback_uses = 0;
  for (auto c : net.feedback_caps) feedback_uses = std::max(feedback_uses, ceil_div(total, c));
  const int64_t claim_uses = ceil_div(n + total, min_fwd);

  std::vector<bool> bad_fwd(n, false), bad_fb(m, false);
  std::mt19937_64 rng(opt.seed);

  for (int r = 0; r < opt.rounds; ++r) {
    std::vector<Sym> msg(k);
    for (auto& s : msg) s = static_cast<Sym>(rng() % q);
    std::vector<Block> sent = encode(code, msg);
    std::vector<Block> recv(n);
    for (int i = 0; i < n; ++i) recv[i] = add_blocks(f, sent[entry[i]], adv.error_at(fwd_id(i), r));
    std::vector<Sym> word(total);
    for (int i = 0; i < n; ++i)
      std::copy(recv[i].begin(), recv[i].end(), word.begin() + code.offset(entry[i]));

    RoundRecord rec;
    rec.round = r;
    rec.message = msg;
    std::vector<std::string> newly;
    bool event = false;
    std::optional<std::vector<Sym>> decoded;

    while (!decoded) {
      std::vector<int> rem;
      int n_bad_fwd = 0, n_bad_fb = 0;
      for (int i = 0; i < n; ++i) {
        if (bad_fwd[i])
          ++n_bad_fwd;
        else
          rem.push_back(i);
      }
      for (int i = 0; i < m; ++i) n_bad_fb += bad_fb[i];
      const int zr = z - n_bad_fwd - n_bad_fb;
      if (zr < 0) break;
      auto positions = [&](const std::vector<int>& links) {
        std::vector<int> ent;
        for (int i : links) ent.push_back(entry[i]);
        return checker.positions_of(ent);
      };
      const bool direct = n_bad_fb == m || (small_feedback && n_bad_fwd >= 2 * m);
      if (direct) {
        const int keep = static_cast<int>(rem.size()) - zr;
        for_each_combination(static_cast<int>(rem.size()), keep, [&](const std::vector<int>& idx) {
          std::vector<int> links;
          for (int i : idx) links.push_back(rem[i]);
          decoded = checker.consistent(word, positions(links));
          return !decoded;
        });
        rec.branch = "subset-decode";
        break;
      }
      decoded = checker.consistent(word, positions(rem));
      if (decoded) {
        rec.branch = event ? "after-claims" : "consistent";
        break;
      }
      // Inconsistency: the received word goes back on every feedback link, claims come forward one
      // feedback link per phase.
      if (!event) ++tr.claim_events;
      event = true;
      tr.overhead_uses += feedback_uses;
      bool progress = false;
      for (int j = 0; j < m; ++j) {
        if (bad_fb[j]) continue;
        tr.overhead_uses += claim_uses;
        Block copy = add_blocks(f, word, adv.error_at(fb_id(j), r));
        TwoNodeClaim claim{std::vector<Sym>(n, 0), copy};
        for (int i = 0; i < n; ++i) {
          Block seg(copy.begin() + code.offset(entry[i]), copy.begin() + code.offset(entry[i]) + code.layout[entry[i]].length);
          if (seg != sent[entry[i]]) claim.mask[i] = 1;
        }
        int framed = 0;
        while (framed < n && adv.controls(fwd_id(framed))) ++framed;
        std::vector<Block> copies;
        for (int i = 0; i < n; ++i) {
          Block b = claim.flat();
          if (adv.controls(fwd_id(i))) {
            ClaimMode mode = adv.mode_of(fwd_id(i));
            if (mode == ClaimMode::Suppress) {
              std::fill(b.begin(), b.end(), 0);
            } else if (mode == ClaimMode::Forge) {
              TwoNodeClaim forged{std::vector<Sym>(n, 0), word};
              if (framed < n) forged.mask[framed] = 1;
              b = forged.flat();
            }
          }
          copies.push_back(std::move(b));
        }
        Block got = repetition_decode(copies);
        std::vector<Sym> got_mask(got.begin(), got.begin() + n);
        std::vector<Sym> got_copy(got.begin() + n, got.end());
        ordered_json cj;
        cj["feedback"] = fb_id(j);
        std::vector<std::string> xs;
        for (int i = 0; i < n; ++i)
          if (got_mask[i]) xs.push_back(fwd_id(i));
        cj["X"] = xs;
        cj["P"] = got_copy;
        if (got_copy != word) {
          bad_fb[j] = true;
          newly.push_back(fb_id(j));
          cj["verdict"] = "feedback-corrupted";
          progress = true;
        } else {
          cj["verdict"] = "accepted";
          for (int i = 0; i < n; ++i)
            if (got_mask[i] && !bad_fwd[i]) {
              bad_fwd[i] = true;
              newly.push_back(fwd_id(i));
              progress = true;
            }
        }
        if (opt.record) {
          rec.feedback[fb_id(j)] = copy;
          rec.claims.push_back(cj);
        }
      }
      if (!progress) break;
    }

    rec.identified = newly;
    rec.decoded = decoded;
    rec.ok = decoded && *decoded == msg;
    for (const auto& id : newly) {
      tr.identified.push_back(id);
      if (!adv.controls(id)) tr.false_accusation = true;
    }
    tr.all_correct = tr.all_correct && rec.ok;
    if (opt.record) {
      for (int i = 0; i < n; ++i) rec.tx[fwd_id(i)] = sent[entry[i]];
      rec.adversary_edges = adv.edges;
      for (const auto& e : adv.edges) {
        Block b = adv.error_at(e, r);
        if (!b.empty()) rec.errors[e] = b;
      }
      tr.rounds.push_back(std::move(rec));
    }
  }
  return tr;
}

namespace {

struct EdgeOption {
  Block error;  // empty = none
  ClaimMode mode = ClaimMode::Relay;
};

std::vector<Block> error_values(uint32_t q, int length, int64_t cap, std::mt19937_64& rng) {
  if (block_space(q, length, cap) <= cap) return nonzero_blocks(q, length);
  std::vector<Block> out;
  while (static_cast<int64_t>(out.size()) < cap) {
    Block b(length);
    for (auto& s : b) s = static_cast<Sym>(rng() % q);
    if (std::any_of(b.begin(), b.end(), [](Sym s) { return s != 0; })) out.push_back(std::move(b));
  }
  return out;
}

}  // namespace

SweepSummary sweep_two_node(const TwoNodeNetwork& net, uint32_t q, int rounds, uint64_t seed, int64_t value_cap) {
  net.validate();
  const int n = static_cast<int>(net.forward_caps.size());
  const int m = static_cast<int>(net.feedback_caps.size());
  int64_t total = 0;
  for (auto c : net.forward_caps) total += c;
  std::mt19937_64 rng(seed);

  std::vector<std::string> ids;
  std::vector<std::vector<EdgeOption>> options;
  for (int i = 0; i < n; ++i) {
    ids.push_back(fwd_id(i));
    std::vector<EdgeOption> opts{{{}, ClaimMode::Suppress}, {{}, ClaimMode::Forge}};
    for (auto& b : error_values(q, static_cast<int>(net.forward_caps[i]), value_cap, rng))
      for (auto mode : {ClaimMode::Relay, ClaimMode::Suppress, ClaimMode::Forge}) opts.push_back({b, mode});
    options.push_back(std::move(opts));
  }
  for (int j = 0; j < m; ++j) {
    ids.push_back(fb_id(j));
    std::vector<EdgeOption> opts;
    for (auto& b : error_values(q, static_cast<int>(total), value_cap, rng)) opts.push_back({b, ClaimMode::Relay});
    options.push_back(std::move(opts));
  }

  SweepSummary sum;
  sum.fixture = "two-node n=" + std::to_string(n) + " m=" + std::to_string(m);
  sum.z = net.z;
  sum.q = q;
  sum.rounds = rounds;
  SimOptions opt{rounds, seed, false};
  const int edges = static_cast<int>(ids.size());
  for (int size = 0; size <= std::min(net.z, edges); ++size) {
    for_each_combination(edges, size, [&](const std::vector<int>& chosen) {
      std::vector<size_t> pick(size, 0);
      while (true) {
        AdversaryAction adv;
        for (int c = 0; c < size; ++c) {
          const auto& o = options[chosen[c]][pick[c]];
          const std::string& id = ids[chosen[c]];
          adv.edges.push_back(id);
          if (!o.error.empty()) adv.errors[id] = {o.error};
          if (o.mode != ClaimMode::Relay) adv.claim_mode[id] = o.mode;
        }
        sum.absorb(simulate_two_node(net, q, adv, opt), adv);
        int c = size - 1;
        while (c >= 0 && ++pick[c] == options[chosen[c]].size()) pick[c--] = 0;
        if (c < 0) break;
      }
      return true;
    });
  }
  return sum;
}

}  // namespace nec

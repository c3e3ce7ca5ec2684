#include "nec/strategies.hpp"

#include <algorithm>
#include <map>
#include <random>

#include "nec/error.hpp"
#include "nec/fixtures.hpp"

namespace nec {
namespace {

using LocalMap = NetworkCode::LocalMap;

NetworkCode shell(const Network& net, const Field& f, int k, std::vector<int> length) {
  NetworkCode c;
  c.net = net;
  c.field = f;
  c.k = k;
  c.length = std::move(length);
  for (int e = 0; e < net.num_edges(); ++e) c.adversarial.push_back(!net.cap(e).is_unbounded());
  return c;
}

void install(NetworkCode& c, const std::map<std::string, LocalMap>& maps) {
  for (int e = 0; e < c.net.num_edges(); ++e) {
    auto it = maps.find(c.net.edge_id(e));
    ensure(it != maps.end(), "no local map for " + c.net.edge_id(e));
    c.local.push_back(it->second);
  }
}

// Position of each sink-incident edge in the sink observation.
std::map<std::string, int> sink_positions(const Network& net) {
  std::map<std::string, int> pos;
  const auto& in = net.in_edges(net.sink());
  for (size_t i = 0; i < in.size(); ++i) pos[net.edge_id(in[i])] = static_cast<int>(i);
  return pos;
}

BlockCode small_code(const Field& f, const Matrix& gen) {
  BlockCode c;
  c.field = f;
  c.k = gen.rows;
  c.layout = unit_layout(gen.cols);
  c.generator = gen;
  c.mds = true;
  return c;
}

// First message consistent with all but at most `errors` positions, trying fewer exclusions first.
std::optional<std::vector<Sym>> correct_symbols(const ConsistencyChecker& ck, const std::vector<Sym>& word, int errors) {
  const int len = static_cast<int>(word.size());
  for (int drop = 0; drop <= errors; ++drop) {
    std::optional<std::vector<Sym>> out;
    for_each_combination(len, drop, [&](const std::vector<int>& skip) {
      std::vector<int> keep;
      for (int p = 0; p < len; ++p)
        if (std::find(skip.begin(), skip.end(), p) == skip.end()) keep.push_back(p);
      out = ck.consistent(word, keep);
      return !out;
    });
    if (out) return out;
  }
  return std::nullopt;
}

}  // namespace

ExampleStrategy fig8_strategy(int n, uint32_t q) {
  if (n < 2) fail(ErrorKind::InvalidInput, "invalid-block", "fig8 needs n >= 2 channel uses per block");
  const Network& net = fixture("fig8").network;
  const Field f(q);
  const Sym a = 1, b = 1, c = 1, d = f.reduce(2);
  if (f.sub(f.mul(a, d), f.mul(b, c)) == 0 || d == 0)
    fail(ErrorKind::Precondition, "field-too-small", "bottom-layer coefficients are dependent over GF(" + std::to_string(q) + ")");
  const int p = n - 1;
  std::vector<int> length;
  for (const auto& e : net.edges()) length.push_back(static_cast<int>(e.cap.value()) * n);
  NetworkCode code = shell(net, f, 2 * p, length);

  auto packet = [p](const Block& blk, int off) { return Block(blk.begin() + off, blk.begin() + off + p); };
  auto pad = [n](Block x) {
    x.resize(n, 0);
    return x;
  };
  auto combo = [f, p](Sym x, const Block& u, Sym y, const Block& v) {
    Block out(p);
    for (int i = 0; i < p; ++i) out[i] = f.add(f.mul(x, u[i]), f.mul(y, v[i]));
    return out;
  };
  auto compare = [packet, p, n](const Block& u, const Block& v) {
    Block out(n, 0);
    if (packet(u, 0) != packet(v, 0)) return out;
    out[0] = 1;
    std::copy(u.begin(), u.begin() + p, out.begin() + 1);
    return out;
  };
  std::map<std::string, LocalMap> maps;
  const int top = 2 * n;
  for (const char* id : {"l1", "l2", "l3"})
    maps[id] = [top](const std::vector<Sym>& msg, const std::vector<Block>&) {
      Block out = msg;  // P1, P2, two spare symbols
      out.resize(top, 0);
      return out;
    };
  maps["l4"] = [=](const std::vector<Sym>&, const std::vector<Block>& in) {
    return pad(combo(a, packet(in[0], 0), b, packet(in[0], p)));
  };
  maps["l5"] = maps["l6"] = [=](const std::vector<Sym>&, const std::vector<Block>& in) { return pad(packet(in[0], 0)); };
  maps["l7"] = maps["l8"] = [=](const std::vector<Sym>&, const std::vector<Block>& in) { return pad(packet(in[0], p)); };
  maps["l9"] = [=](const std::vector<Sym>&, const std::vector<Block>& in) {
    return pad(combo(c, packet(in[0], 0), d, packet(in[0], p)));
  };
  maps["l10"] = maps["l13"] = [](const std::vector<Sym>&, const std::vector<Block>& in) { return in[0]; };
  maps["l11"] = maps["l12"] = [=](const std::vector<Sym>&, const std::vector<Block>& in) { return compare(in[0], in[1]); };
  install(code, maps);

  ExampleStrategy st;
  st.fixture = "fig8";
  st.code = std::move(code);
  st.uses_per_block = n;
  st.description = "nonlinear detection, flag symbol per block, n=" + std::to_string(n);
  const auto pos = sink_positions(net);
  st.decode = [=](const std::vector<Block>& sink) {
    const Block& b10 = sink[pos.at("l10")];
    const Block& b11 = sink[pos.at("l11")];
    const Block& b12 = sink[pos.at("l12")];
    const Block& b13 = sink[pos.at("l13")];
    const bool ok11 = b11[0] == 1, ok12 = b12[0] == 1;
    Block p1(p), p2(p);
    StrategyDecode out;
    auto finish = [&](const char* branch) {
      std::vector<Sym> m = p1;
      m.insert(m.end(), p2.begin(), p2.end());
      out.message = m;
      out.branch = branch;
      return out;
    };
    const Sym det = f.sub(f.mul(a, d), f.mul(b, c));
    if (!ok11 && !ok12) {
      for (int i = 0; i < p; ++i) {
        p1[i] = f.div(f.sub(f.mul(d, b10[i]), f.mul(b, b13[i])), det);
        p2[i] = f.div(f.sub(f.mul(a, b13[i]), f.mul(c, b10[i])), det);
      }
      return finish("l10-l13");
    }
    if (!ok11) {
      for (int i = 0; i < p; ++i) {
        p2[i] = b12[1 + i];
        p1[i] = f.div(f.sub(b13[i], f.mul(d, p2[i])), c);
      }
      return finish("l12-l13");
    }
    if (!ok12) {
      for (int i = 0; i < p; ++i) {
        p1[i] = b11[1 + i];
        p2[i] = f.div(f.sub(b10[i], f.mul(a, p1[i])), b);
      }
      return finish("l10-l11");
    }
    // Every flag set: per position a (4,2) MDS word with at most one wrong symbol.
    Matrix gen(2, 4);
    const Sym cols[4][2] = {{a, b}, {1, 0}, {0, 1}, {c, d}};
    for (int j = 0; j < 4; ++j) {
      gen.at(0, j) = cols[j][0];
      gen.at(1, j) = cols[j][1];
    }
    const ConsistencyChecker ck(small_code(f, gen));
    for (int i = 0; i < p; ++i) {
      auto m = correct_symbols(ck, {b10[i], b11[1 + i], b12[1 + i], b13[i]}, 1);
      if (!m) {
        out.branch = "bottom-mds-failed";
        return out;
      }
      p1[i] = (*m)[0];
      p2[i] = (*m)[1];
    }
    return finish("bottom-mds");
  };
  return st;
}

ExampleStrategy fig9_strategy(const std::vector<std::string>& correcting, uint32_t q) {
  const Network& net = fixture("fig9").network;
  const Field f(q);
  const int t = net.sink(), s = net.source();
  const auto& bottom = net.in_edges(t);
  int total = 0;
  std::vector<int> offset(net.num_edges(), -1);
  for (int e : bottom) {
    offset[e] = total;
    total += static_cast<int>(net.cap(e).value());
  }
  const int k = total - 4;  // two wrong symbols at most reach the sink
  if (q <= static_cast<uint32_t>(total)) fail(ErrorKind::Precondition, "field-too-small", "sink code needs q > 12");
  const BlockCode sink_code = make_mds(f, total, k);
  Matrix inner(2, 4);  // (e, f, e+f, e+2f)
  const Sym inner_cols[4][2] = {{1, 0}, {0, 1}, {1, 1}, {1, 2}};
  for (int j = 0; j < 4; ++j) {
    inner.at(0, j) = inner_cols[j][0];
    inner.at(1, j) = inner_cols[j][1];
  }
  const BlockCode inner_code = small_code(f, inner);

  // Each middle edge carries one linear combination of the sink codeword.
  std::vector<std::vector<Sym>> coef(net.num_edges());
  std::map<std::string, LocalMap> maps;
  for (int y = 0; y < net.num_nodes(); ++y) {
    if (y == s || y == t) continue;
    const auto& outs = net.out_edges(y);
    if (outs.size() != 1 || net.head(outs[0]) != t) continue;  // only the decision layer
    const int b = outs[0];
    const auto& ins = net.in_edges(y);
    const int width = static_cast<int>(net.cap(b).value());
    const bool corrects = std::find(correcting.begin(), correcting.end(), net.node_id(y)) != correcting.end();
    if (corrects) {
      if (ins.size() != 4 || width != 2)
        fail(ErrorKind::Precondition, "not-a-decision-node", net.node_id(y) + " needs 4 unit inputs and 2 outputs");
      for (int j = 0; j < 4; ++j) {
        coef[ins[j]].assign(total, 0);
        coef[ins[j]][offset[b]] = inner.at(0, j);
        coef[ins[j]][offset[b] + 1] = inner.at(1, j);
      }
      const ConsistencyChecker ck(inner_code);
      maps[net.edge_id(b)] = [ck](const std::vector<Sym>&, const std::vector<Block>& in) {
        std::vector<Sym> word;
        for (const auto& blk : in) word.push_back(blk[0]);
        auto m = correct_symbols(ck, word, 1);
        return m ? Block(*m) : Block{word[0], word[1]};
      };
    } else {
      if (static_cast<int>(ins.size()) != width)
        fail(ErrorKind::Precondition, "forwarding-mismatch", net.node_id(y) + " cannot forward its inputs");
      for (int j = 0; j < width; ++j) {
        coef[ins[j]].assign(total, 0);
        coef[ins[j]][offset[b] + j] = 1;
      }
      maps[net.edge_id(b)] = [](const std::vector<Sym>&, const std::vector<Block>& in) {
        Block out;
        for (const auto& blk : in) out.push_back(blk[0]);
        return out;
      };
    }
  }
  for (int top : net.out_edges(s)) {
    const int x = net.head(top);
    const auto& outs = net.out_edges(x);
    if (static_cast<int64_t>(outs.size()) != net.cap(top).value())
      fail(ErrorKind::Precondition, "forwarding-mismatch", net.node_id(x) + " cannot forward its input");
    std::vector<std::vector<Sym>> rows;
    for (size_t j = 0; j < outs.size(); ++j) {
      const int mid = outs[j];
      ensure(!coef[mid].empty(), "middle edge without assignment " + net.edge_id(mid));
      maps[net.edge_id(mid)] = [j](const std::vector<Sym>&, const std::vector<Block>& in) { return Block{in[0][j]}; };
      rows.push_back(coef[mid]);
    }
    maps[net.edge_id(top)] = [rows, sink_code, f](const std::vector<Sym>& msg, const std::vector<Block>&) {
      const std::vector<Sym> cw = encode_flat(sink_code, msg);
      Block out;
      for (const auto& r : rows) {
        Sym v = 0;
        for (size_t i = 0; i < r.size(); ++i) v = f.add(v, f.mul(r[i], cw[i]));
        out.push_back(v);
      }
      return out;
    };
  }
  std::vector<int> length;
  for (const auto& e : net.edges()) length.push_back(static_cast<int>(e.cap.value()));
  NetworkCode code = shell(net, f, k, length);
  install(code, maps);

  ExampleStrategy st;
  st.fixture = "fig9";
  st.code = std::move(code);
  std::string names;
  for (const auto& c : correcting) names += (names.empty() ? "" : ",") + c;
  st.description = "(4,2) MDS correction at " + names + ", (12,8) MDS at the sink";
  const ConsistencyChecker ck(sink_code);
  st.decode = [ck](const std::vector<Block>& sink) {
    StrategyDecode out;
    out.message = correct_symbols(ck, flatten(sink), 2);
    out.branch = out.message ? "sink-mds" : "sink-mds-failed";
    return out;
  };
  return st;
}

ExampleStrategy fig10_strategy(uint32_t q, uint64_t seed, int retries) {
  const Network& net = fixture("fig10").network;
  const Field f(q);
  std::vector<int> length;
  for (const auto& e : net.edges()) length.push_back(static_cast<int>(e.cap.value()));
  for (int t = 0; t < retries; ++t) {
    NetworkCode code = random_linear_code(net, f, 4, length, seed + static_cast<uint64_t>(t));
    if (find_confusable(code, 1)) continue;
    ExampleStrategy st;
    st.fixture = "fig10";
    st.description = "random linear code over GF(" + std::to_string(q) + "), verified after " + std::to_string(t + 1) +
                     " draws";
    st.code = code;
    st.decode = [code](const std::vector<Block>& sink) {
      StrategyDecode out;
      out.message = decode_linear(code, sink, 1);
      out.branch = "linear-support-search";
      return out;
    };
    return st;
  }
  fail(ErrorKind::Infeasible, "retry-limit-exceeded", "no verified fig10 code over GF(" + std::to_string(q) + ")");
}

ExampleStrategy example_strategy(const std::string& fixture_id, uint64_t seed) {
  if (fixture_id == "fig8") return fig8_strategy(4);
  if (fixture_id == "fig9") return fig9_strategy();
  if (fixture_id == "fig10") return fig10_strategy(13, seed);
  fail(ErrorKind::InvalidInput, "unknown-strategy", fixture_id + " has no example strategy");
}

namespace {

std::vector<Sym> nth_message(uint32_t q, int k, uint64_t index) {
  std::vector<Sym> m(k);
  for (auto& s : m) {
    s = static_cast<Sym>(index % q);
    index /= q;
  }
  return m;
}

}  // namespace

SimulationTrace run_example_strategy(const ExampleStrategy& st, const AdversaryAction& adv, const SimOptions& opt,
                                     bool every_message) {
  adv.validate(st.z);
  const NetworkCode& code = st.code;
  const Network& net = code.net;
  ErrorVector errors(net.num_edges());
  for (const auto& e : adv.edges) {
    const int idx = net.edge_index(e);
    if (!code.adversarial[idx]) fail(ErrorKind::InvalidInput, "adversary-budget-violation", e + " is not attackable");
  }
  const uint32_t q = code.field.q();
  int rounds = opt.rounds;
  if (every_message) {
    uint64_t count = 1;
    for (int i = 0; i < code.k; ++i) count *= q;
    if (count > 1'000'000) fail(ErrorKind::GuardLimit, "search-space-limit", "too many messages to enumerate");
    rounds = static_cast<int>(count);
  }
  SimulationTrace tr;
  tr.protocol = "example-strategy";
  tr.instance = st.fixture + ": " + st.description;
  tr.z = st.z;
  tr.q = q;
  tr.seed = opt.seed;
  tr.symbols_per_round = code.k;
  tr.uses_per_round = st.uses_per_block;
  tr.data_uses = static_cast<int64_t>(rounds) * st.uses_per_block;
  std::mt19937_64 rng(opt.seed);
  for (int r = 0; r < rounds; ++r) {
    std::vector<Sym> msg(code.k);
    if (every_message)
      msg = nth_message(q, code.k, static_cast<uint64_t>(r));
    else
      for (auto& s : msg) s = static_cast<Sym>(rng() % q);
    for (int e = 0; e < net.num_edges(); ++e) errors[e] = adv.error_at(net.edge_id(e), r);
    const auto sink = evaluate(code, msg, errors);
    const StrategyDecode dec = st.decode(sink);
    const bool ok = dec.message && *dec.message == msg;
    tr.all_correct = tr.all_correct && ok;
    if (!opt.record) continue;
    RoundRecord rec;
    rec.round = r;
    rec.message = msg;
    const auto clean = evaluate_all(code, msg, {});
    for (int e = 0; e < net.num_edges(); ++e) rec.tx[net.edge_id(e)] = clean.edges[e];
    rec.adversary_edges = adv.edges;
    for (const auto& e : adv.edges) {
      Block b = adv.error_at(e, r);
      if (!b.empty()) rec.errors[e] = b;
    }
    rec.decoded = dec.message;
    rec.branch = dec.branch;
    rec.ok = ok;
    tr.rounds.push_back(std::move(rec));
  }
  return tr;
}

SweepSummary sweep_example_strategy(const ExampleStrategy& st, int rounds, uint64_t seed, int64_t value_cap,
                                    bool every_message) {
  const NetworkCode& code = st.code;
  const Network& net = code.net;
  const uint32_t q = code.field.q();
  std::mt19937_64 rng(seed);
  std::vector<int> edges;
  std::vector<std::vector<Block>> values;
  for (int e = 0; e < net.num_edges(); ++e) {
    if (!code.adversarial[e]) continue;
    edges.push_back(e);
    if (block_space(q, code.length[e], value_cap) <= value_cap) {
      values.push_back(nonzero_blocks(q, code.length[e]));
      continue;
    }
    std::vector<Block> sample;
    while (static_cast<int64_t>(sample.size()) < value_cap) {
      Block b(code.length[e]);
      for (auto& s : b) s = static_cast<Sym>(rng() % q);
      if (std::any_of(b.begin(), b.end(), [](Sym s) { return s != 0; })) sample.push_back(std::move(b));
    }
    values.push_back(std::move(sample));
  }
  SweepSummary sum;
  sum.fixture = st.fixture;
  sum.z = st.z;
  sum.q = q;
  sum.rounds = rounds;
  const SimOptions opt{rounds, seed, false};
  const int n = static_cast<int>(edges.size());
  for (int size = 0; size <= std::min(st.z, n); ++size) {
    for_each_combination(n, size, [&](const std::vector<int>& chosen) {
      std::vector<size_t> pick(size, 0);
      while (true) {
        AdversaryAction adv;
        for (int c = 0; c < size; ++c) {
          const std::string& id = net.edge_id(edges[chosen[c]]);
          adv.edges.push_back(id);
          adv.errors[id] = {values[chosen[c]][pick[c]]};
        }
        SimulationTrace tr = run_example_strategy(st, adv, opt, every_message);
        sum.rounds = static_cast<int>(tr.data_uses / tr.uses_per_round);
        sum.absorb(tr, adv);
        int c = size - 1;
        while (c >= 0 && ++pick[c] == values[chosen[c]].size()) pick[c--] = 0;
        if (c < 0) break;
      }
      return true;
    });
  }
  return sum;
}

// ---- linear insufficiency on fig8 ----

InsufficiencyCertificate linear_insufficiency_certificate(const Field& f, const Matrix& gt, const Matrix& m1,
                                                          const Matrix& m2, int k, int n) {
  if (3 * k <= 4 * n)
    fail(ErrorKind::Precondition, "precondition-violated",
         "3k > 4n required, got k=" + std::to_string(k) + " n=" + std::to_string(n));
  if (gt.cols != k || m1.rows != gt.rows || m2.rows != gt.rows)
    fail(ErrorKind::InvalidInput, "layout-mismatch", "transfer matrix shapes disagree");
  InsufficiencyCertificate cert;
  cert.rank_m1 = rank(f, m1);
  cert.rank_m2 = rank(f, m2);
  cert.kind = "intersection";
  if (cert.rank_m1 < k || cert.rank_m2 < k) {
    cert.kind = "rank-deficient";
    cert.deficient = cert.rank_m1 < k ? "M1" : "M2";
  }
  // Null space of [G_t | -M1 | -M2]; any vector with a nonzero x part gives the pair.
  const int cols = k + m1.cols + m2.cols;
  Matrix joint(gt.rows, cols);
  for (int r = 0; r < gt.rows; ++r) {
    int c = 0;
    for (int j = 0; j < gt.cols; ++j) joint.at(r, c++) = gt.at(r, j);
    for (int j = 0; j < m1.cols; ++j) joint.at(r, c++) = f.neg(m1.at(r, j));
    for (int j = 0; j < m2.cols; ++j) joint.at(r, c++) = f.neg(m2.at(r, j));
  }
  for (const auto& v : nullspace(f, joint)) {
    if (std::all_of(v.begin(), v.begin() + k, [](Sym s) { return s == 0; })) continue;
    cert.x.assign(v.begin(), v.begin() + k);
    cert.e.assign(v.begin() + k, v.end());
    return cert;
  }
  ensure(cert.kind == "rank-deficient", "no intersection although 3k > 4n and both ranks reach k");
  return cert;
}

bool verify_certificate(const Field& f, const Matrix& gt, const Matrix& m1, const Matrix& m2,
                        const InsufficiencyCertificate& cert) {
  if (cert.x.empty() || std::all_of(cert.x.begin(), cert.x.end(), [](Sym s) { return s == 0; })) return false;
  const std::vector<Sym> lhs = mul(f, gt, cert.x);
  const std::vector<Sym> e1(cert.e.begin(), cert.e.begin() + m1.cols);
  const std::vector<Sym> e2(cert.e.begin() + m1.cols, cert.e.end());
  const std::vector<Sym> a = mul(f, m1, e1), b = mul(f, m2, e2);
  for (size_t i = 0; i < lhs.size(); ++i)
    if (lhs[i] != f.add(a[i], b[i])) return false;
  return true;
}

Fig8Transfer fig8_transfer(const NetworkCode& code) {
  return {message_transfer(code), error_transfer(code, code.net.edge_index("l1")),
          error_transfer(code, code.net.edge_index("l3"))};
}

NetworkCode random_fig8_linear_code(const Field& f, int k, int n, uint64_t seed) {
  const Network& net = fixture("fig8").network;
  std::vector<int> length;
  for (const auto& e : net.edges()) length.push_back(static_cast<int>(e.cap.value()) * n);
  return random_linear_code(net, f, k, length, seed);
}

}  // namespace nec

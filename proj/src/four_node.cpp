#include <algorithm>
#include <boost/multiprecision/cpp_int.hpp>
#include <limits>
#include <random>
#include <set>

#include "nec/bounds.hpp"
#include "nec/error.hpp"
#include "nec/protocols.hpp"

namespace nec {

using Rational = boost::multiprecision::cpp_rational;

// ---- instance recognition ----

std::vector<int64_t> FourNodeInstance::forward_caps() const {
  std::vector<int64_t> caps;
  for (int e : sa) caps.push_back(net.cap(e).value());
  for (int e : bt) caps.push_back(net.cap(e).value());
  return caps;
}

FourNodeInstance four_node_instance(const Network& net, int z) {
  auto reject = [](const std::string& why) -> FourNodeInstance { fail(ErrorKind::Precondition, "not-four-node", why); };
  if (net.num_nodes() != 4) return reject("need exactly four nodes");
  const int s = net.source(), t = net.sink();
  int node_a = -1, node_b = -1;
  for (int v = 0; v < 4; ++v) {
    if (v == s || v == t) continue;
    bool reliable_to_sink = false, reliable_from_source = false;
    for (int e : net.out_edges(v))
      if (net.head(e) == t && net.cap(e).is_unbounded()) reliable_to_sink = true;
    for (int e : net.in_edges(v))
      if (net.tail(e) == s && net.cap(e).is_unbounded()) reliable_from_source = true;
    if (reliable_to_sink && !reliable_from_source) node_a = v;
    if (reliable_from_source && !reliable_to_sink) node_b = v;
  }
  if (node_a < 0 || node_b < 0) return reject("cannot tell A from B");
  FourNodeInstance inst;
  inst.net = net;
  inst.z = z;
  for (int e = 0; e < net.num_edges(); ++e) {
    int u = net.tail(e), v = net.head(e);
    bool unb = net.cap(e).is_unbounded();
    if (u == s && v == node_a && !unb) inst.sa.push_back(e);
    else if (u == node_b && v == t && !unb) inst.bt.push_back(e);
    else if (u == node_a && v == node_b && !unb) inst.fb.push_back(e);
    else if (unb && ((u == s && v == node_b) || (u == node_a && v == t))) continue;
    else return reject("unexpected edge " + net.edge_id(e));
  }
  if (inst.sa.empty() || inst.bt.empty()) return reject("missing s->A or B->t links");
  for (int e : inst.sa) inst.c1 += net.cap(e).value();
  for (int e : inst.bt) inst.c2 += net.cap(e).value();
  inst.cz = generalized_bound(net, z).value;
  return inst;
}

// ---- encoder at A and conditions ----

int EncoderAtA::feedback_length() const {
  int h = 0;
  for (const auto& m : maps) h += m.cols;
  return h;
}

EncoderAtA encoder_from_degrees(const Field& f, const std::vector<int64_t>& caps, const std::vector<int64_t>& degrees) {
  if (caps.size() != degrees.size()) fail(ErrorKind::InvalidInput, "layout-mismatch", "one degree per s->A link");
  EncoderAtA enc;
  for (size_t i = 0; i < caps.size(); ++i) {
    const int r = static_cast<int>(caps[i]);
    if (degrees[i] < 0 || degrees[i] > r) fail(ErrorKind::InvalidInput, "bad-degree", "degree outside [0, capacity]");
    if (static_cast<uint32_t>(r) >= f.q()) fail(ErrorKind::Precondition, "field-too-small", "capacity reaches q");
    Matrix m(r, r - static_cast<int>(degrees[i]));
    for (int p = 0; p < r; ++p)
      for (int j = 0; j < m.cols; ++j) m.at(p, j) = f.pow(static_cast<Sym>(p + 1), j);
    enc.maps.push_back(std::move(m));
  }
  return enc;
}

std::vector<int64_t> degree_of_freedom(const Field& f, const EncoderAtA& enc) {
  std::vector<int64_t> out;
  for (const auto& m : enc.maps) out.push_back(m.rows - rank(f, m));
  return out;
}

namespace {

std::string show(const Rational& r) {
  auto num = boost::multiprecision::numerator(r), den = boost::multiprecision::denominator(r);
  return den == 1 ? num.str() : num.str() + "/" + den.str();
}

ConditionCheck check_rational(const std::vector<int64_t>& caps, const std::vector<Rational>& deg, int z, int m,
                              int64_t slack) {
  const int n = static_cast<int>(caps.size());
  ConditionCheck out;
  const Rational bound(slack);
  for_each_combination(n, std::min(2 * z, n), [&](const std::vector<int>& set) {
    Rational sum = 0;
    for (int i : set) sum += deg[i];
    if (sum > bound) {
      out = {false, 1, set, {}, show(sum), show(bound)};
      return false;
    }
    return true;
  });
  if (!out.pass) return out;
  const int size2 = std::min(z, n);
  for_each_combination(n, size2, [&](const std::vector<int>& a2) {
    std::vector<int> rest;
    for (int i = 0; i < n; ++i)
      if (!std::binary_search(a2.begin(), a2.end(), i)) rest.push_back(i);
    Rational base = 0;
    for (int i : a2) base += deg[i];
    const int size3 = std::min(std::max(z - m, 0), static_cast<int>(rest.size()));
    for_each_combination(static_cast<int>(rest.size()), size3, [&](const std::vector<int>& pick) {
      Rational sum = base;
      std::vector<int> a3;
      for (int i : pick) {
        a3.push_back(rest[i]);
        sum += caps[rest[i]];
      }
      if (sum > bound) {
        out = {false, 2, a2, a3, show(sum), show(bound)};
        return false;
      }
      return true;
    });
    return out.pass;
  });
  return out;
}

}  // namespace

ConditionCheck check_conditions(const std::vector<int64_t>& caps, const std::vector<std::string>& degrees, int z, int m,
                                int64_t slack) {
  if (caps.size() != degrees.size()) fail(ErrorKind::InvalidInput, "layout-mismatch", "one degree per forward link");
  std::vector<Rational> deg;
  for (const auto& d : degrees) {
    try {
      deg.emplace_back(d);
    } catch (const std::exception&) {
      fail(ErrorKind::InvalidInput, "bad-degree", "cannot parse '" + d + "'");
    }
  }
  return check_rational(caps, deg, z, m, slack);
}

ConditionCheck check_conditions(const std::vector<int64_t>& caps, const std::vector<int64_t>& degrees, int z, int m,
                                int64_t slack) {
  if (caps.size() != degrees.size()) fail(ErrorKind::InvalidInput, "layout-mismatch", "one degree per forward link");
  std::vector<Rational> deg(degrees.begin(), degrees.end());
  return check_rational(caps, deg, z, m, slack);
}

// ---- forward code ----

namespace {

// Forward links in order s->A then B->t, mapped onto the code layout.
struct ForwardMap {
  std::vector<std::string> ids;
  std::vector<int> caps;
  std::vector<int> entry;                   // layout entry per forward link
  std::vector<std::vector<int>> positions;  // codeword positions per forward link
};

ForwardMap forward_map(const FourNodeInstance& inst, const BlockCode& code) {
  ForwardMap fm;
  for (int e : inst.sa) fm.ids.push_back(inst.net.edge_id(e));
  for (int e : inst.bt) fm.ids.push_back(inst.net.edge_id(e));
  for (auto c : inst.forward_caps()) fm.caps.push_back(static_cast<int>(c));
  for (const auto& id : fm.ids) {
    int en = code.entry_of(id);
    fm.entry.push_back(en);
    std::vector<int> pos;
    for (int j = 0; j < code.layout[en].length; ++j) pos.push_back(code.offset(en) + j);
    fm.positions.push_back(pos);
  }
  return fm;
}

std::vector<LayoutEntry> forward_layout(const FourNodeInstance& inst) {
  std::vector<LayoutEntry> layout;
  for (int e : inst.sa) layout.push_back({inst.net.edge_id(e), static_cast<int>(inst.net.cap(e).value())});
  for (int e : inst.bt) layout.push_back({inst.net.edge_id(e), static_cast<int>(inst.net.cap(e).value())});
  return make_layout(layout);
}

}  // namespace

bool corrects_feedback_preserving(const FourNodeInstance& inst, const Field& f, const EncoderAtA& enc,
                                  const BlockCode& code) {
  const ForwardMap fm = forward_map(inst, code);
  const int a = inst.a(), n = inst.a() + inst.b(), len = code.length();
  // Error directions each forward link can take without changing what A feeds back.
  std::vector<std::vector<std::vector<Sym>>> dirs(n);
  for (int i = 0; i < n; ++i) {
    std::vector<std::vector<Sym>> local;
    if (i < a) {
      local = nullspace(f, enc.maps[i].transpose());
    } else {
      for (int p = 0; p < fm.caps[i]; ++p) {
        std::vector<Sym> u(fm.caps[i], 0);
        u[p] = 1;
        local.push_back(u);
      }
    }
    for (const auto& v : local) {
      std::vector<Sym> full(len, 0);
      for (int p = 0; p < fm.caps[i]; ++p) full[fm.positions[i][p]] = v[p];
      dirs[i].push_back(full);
    }
  }
  bool ok = true;
  for_each_combination(n, std::min(2 * inst.z, n), [&](const std::vector<int>& support) {
    int rows = code.k;
    for (int i : support) rows += static_cast<int>(dirs[i].size());
    if (rows > len) {
      ok = false;
      return false;
    }
    Matrix stack(rows, len);
    int r = 0;
    for (; r < code.k; ++r)
      for (int c = 0; c < len; ++c) stack.at(r, c) = code.generator.at(r, c);
    for (int i : support)
      for (const auto& d : dirs[i]) {
        for (int c = 0; c < len; ++c) stack.at(r, c) = d[c];
        ++r;
      }
    ok = rank(f, stack) == rows;
    return ok;
  });
  return ok;
}

namespace {

// Number of failing erasure mixes, stopping early once `stop_after` are found.
int mixed_erasure_failures(const FourNodeInstance& inst, const Field& f, const EncoderAtA& enc, const BlockCode& code,
                           int stop_after, int64_t combo_limit) {
  const ForwardMap fm = forward_map(inst, code);
  const int a = inst.a(), n = inst.a() + inst.b(), len = code.length();
  const int slack = len - code.k;
  std::vector<std::vector<std::vector<Sym>>> fp_dirs(n), full_dirs(n);
  for (int i = 0; i < n; ++i) {
    auto embed = [&](const std::vector<Sym>& v) {
      std::vector<Sym> out(len, 0);
      for (int p = 0; p < fm.caps[i]; ++p) out[fm.positions[i][p]] = v[p];
      return out;
    };
    for (int p = 0; p < fm.caps[i]; ++p) {
      std::vector<Sym> u(fm.caps[i], 0);
      u[p] = 1;
      full_dirs[i].push_back(embed(u));
    }
    if (i < a)
      for (const auto& v : nullspace(f, enc.maps[i].transpose())) fp_dirs[i].push_back(embed(v));
  }
  auto dim = [&](int i, int type) { return static_cast<int>(type == 1 ? fp_dirs[i].size() : type == 2 ? full_dirs[i].size() : 0); };
  auto has_fp = [&](int i) { return i < a && !fp_dirs[i].empty() && fp_dirs[i].size() < full_dirs[i].size(); };

  std::vector<int> type(n, 0);  // 0 none, 1 feedback-preserving, 2 arbitrary
  int64_t checked = 0;
  int failures = 0;
  auto leaf = [&](int used) {
    bool any_fp = false, maximal = true;
    for (int i = 0; i < n; ++i) {
      any_fp = any_fp || type[i] == 1;
      if (type[i] == 0 && (has_fp(i) ? dim(i, 1) : dim(i, 2)) <= slack - used) maximal = false;
      if (type[i] == 1 && dim(i, 2) - dim(i, 1) <= slack - used) maximal = false;
    }
    if (!any_fp || !maximal) return;
    if (++checked > combo_limit)
      fail(ErrorKind::GuardLimit, "verification-too-large", "more than " + std::to_string(combo_limit) + " erasure mixes");
    Matrix stack(code.k + used, len);
    int r = 0;
    for (; r < code.k; ++r)
      for (int c = 0; c < len; ++c) stack.at(r, c) = code.generator.at(r, c);
    for (int i = 0; i < n; ++i)
      for (const auto& d : type[i] == 1 ? fp_dirs[i] : type[i] == 2 ? full_dirs[i] : std::vector<std::vector<Sym>>{}) {
        for (int c = 0; c < len; ++c) stack.at(r, c) = d[c];
        ++r;
      }
    if (rank(f, stack) != stack.rows) ++failures;
  };
  auto rec = [&](auto&& self, int i, int used) -> void {
    if (failures >= stop_after) return;
    if (i == n) {
      leaf(used);
      return;
    }
    for (int t = 0; t <= 2; ++t) {
      if (t == 1 && !has_fp(i)) continue;
      if (used + dim(i, t) > slack) continue;
      type[i] = t;
      self(self, i + 1, used + dim(i, t));
      type[i] = 0;
    }
  };
  rec(rec, 0, 0);
  return failures;
}

}  // namespace

bool separates_mixed_erasures(const FourNodeInstance& inst, const Field& f, const EncoderAtA& enc, const BlockCode& code,
                              int64_t combo_limit) {
  return mixed_erasure_failures(inst, f, enc, code, 1, combo_limit) == 0;
}

ForwardCode sample_generic_forward_code(const FourNodeInstance& inst, const Field& f, const EncoderAtA& enc,
                                        uint64_t seed, int retries) {
  const auto layout = forward_layout(inst);
  const int k = static_cast<int>(inst.cz);
  ForwardCode out;
  if (f.q() > static_cast<uint32_t>(inst.total())) {
    out.code = make_mds(f, layout, k);
    out.attempts = 1;
    out.construction = "vandermonde";
    if (corrects_feedback_preserving(inst, f, enc, out.code) && separates_mixed_erasures(inst, f, enc, out.code)) return out;
  }
  // Generalized Reed-Solomon codes stay MDS for any distinct points and nonzero column multipliers. Local
  // search over those parameters, one column at a time, driving the failing erasure mixes to zero.
  std::mt19937_64 rng(seed);
  const int len = static_cast<int>(inst.total());
  if (f.q() < static_cast<uint32_t>(len)) fail(ErrorKind::Precondition, "field-too-small", "q below forward capacity");
  std::vector<Sym> points(f.q());
  for (Sym x = 0; x < f.q(); ++x) points[x] = x;
  std::shuffle(points.begin(), points.end(), rng);  // first len entries are in use
  std::vector<Sym> scales(len);
  for (auto& v : scales) v = static_cast<Sym>(1 + rng() % (f.q() - 1));
  auto build = [&] {
    BlockCode c;
    c.field = f;
    c.k = k;
    c.layout = layout;
    c.generator = Matrix(k, len);
    for (int j = 0; j < len; ++j)
      for (int i = 0; i < k; ++i) c.generator.at(i, j) = f.mul(scales[j], f.pow(points[j], i));
    c.mds = true;
    return c;
  };
  const int all = std::numeric_limits<int>::max();
  int cost = mixed_erasure_failures(inst, f, enc, build(), all, 200000);
  for (int t = 0; t < retries; ++t) {
    ++out.attempts;
    if (cost == 0) {
      BlockCode c = build();
      if (corrects_feedback_preserving(inst, f, enc, c)) {
        out.code = std::move(c);
        out.construction = "random";
        return out;
      }
    }
    const int col = static_cast<int>(rng() % len);
    const auto old_points = points;
    const auto old_scales = scales;
    if (rng() % 2)
      scales[col] = static_cast<Sym>(1 + rng() % (f.q() - 1));
    else
      std::swap(points[col], points[rng() % f.q()]);
    const int next = mixed_erasure_failures(inst, f, enc, build(), cost + 1, 200000);
    if (next <= cost) {
      cost = next;
    } else {
      points = old_points;
      scales = old_scales;
    }
  }
  fail(ErrorKind::Infeasible, "retry-limit-exceeded",
       "no verified forward code after " + std::to_string(out.attempts) + " attempts over GF(" + std::to_string(f.q()) + ")");
}

FourNodeSetup prepare_four_node(const FourNodeInstance& inst, uint32_t q, const std::vector<int64_t>& degrees,
                                uint64_t seed) {
  FourNodeSetup s;
  s.inst = inst;
  s.field = Field(q);
  const std::vector<int64_t> caps = inst.forward_caps();
  std::vector<int64_t> sa_caps(caps.begin(), caps.begin() + inst.a());
  s.enc = encoder_from_degrees(s.field, sa_caps, degrees);
  const int h = s.enc.feedback_length();
  for (int e : inst.fb)
    if (inst.net.cap(e).value() < h)
      fail(ErrorKind::Precondition, "feedback-capacity-below-h",
           inst.net.edge_id(e) + " carries " + std::to_string(inst.net.cap(e).value()) + " < h=" + std::to_string(h));
  std::vector<int64_t> all_deg = degree_of_freedom(s.field, s.enc);
  for (int e : inst.bt) all_deg.push_back(inst.net.cap(e).value());
  auto cond = check_conditions(caps, all_deg, inst.z, inst.m(), inst.total() - inst.cz);
  if (!cond.pass)
    fail(ErrorKind::Precondition, "conditions-violated",
         "condition " + std::to_string(cond.violated) + ": " + cond.lhs + " > " + cond.rhs);
  s.code = sample_generic_forward_code(inst, s.field, s.enc, seed);
  return s;
}

// ---- protocol run ----

namespace {

// What B reports about one feedback link in one round; an empty mask means "no claim".
struct Content {
  std::vector<uint8_t> mask;  // over s->A links
  Block copy;                 // what B received on the feedback link
  bool operator==(const Content&) const = default;
  bool is_claim() const { return !mask.empty(); }
};

struct Claim {
  int round = 0, feedback = 0;
  Content content;
};

class FourNodeRun {
 public:
  FourNodeRun(const FourNodeSetup& s, const AdversaryAction& adv, const SimOptions& opt)
      : s_(s), inst_(s.inst), f_(s.field), code_(s.code.code), checker_(code_), adv_(adv), opt_(opt),
        fm_(forward_map(inst_, code_)), a_(inst_.a()), b_(inst_.b()), m_(inst_.m()), h_(s.enc.feedback_length()) {
    for (int e : inst_.fb) fb_ids_.push_back(inst_.net.edge_id(e));
    for (int i = 0; i < a_; ++i) {
      std::vector<int> cols = fm_.positions[i];
      gm_.push_back(mul(f_, code_.generator.columns(cols), s.enc.maps[i]));
    }
  }

  SimulationTrace run();

 private:
  Block feedback_word(const std::vector<Sym>& word) const;
  Block segment(const std::vector<Sym>& word, int link) const;
  std::optional<std::vector<Sym>> consistent(const std::vector<Sym>& word, const std::vector<int>& links) const;
  std::vector<Block> window_lists(const std::vector<Claim>& claims, const std::vector<Block>& honest_feedback) const;
  std::vector<std::optional<Content>> parse_window(const Block& list) const;
  std::optional<std::vector<Sym>> fallback_decode(const std::vector<Sym>& word, const std::vector<int>& rem, int zr) const;
  void mark_deviating(const std::vector<Sym>& word, const std::vector<Sym>& msg, std::vector<std::string>& newly);
  std::optional<std::vector<Sym>> decode_round(int r, const std::vector<Sym>& word, const Block& g_hat,
                                               const std::vector<std::vector<std::optional<Content>>>& shown,
                                               std::vector<std::string>& newly, std::string& branch);
  int slot_length() const { return 1 + round_digits_ + 1 + a_ + h_; }

  const FourNodeSetup& s_;
  const FourNodeInstance& inst_;
  const Field& f_;
  const BlockCode& code_;
  ConsistencyChecker checker_;
  const AdversaryAction& adv_;
  SimOptions opt_;
  ForwardMap fm_;
  int a_, b_, m_, h_;
  int round_digits_ = 1;
  std::vector<std::string> fb_ids_;
  std::vector<Matrix> gm_;  // generator columns of each s->A link times its encoding matrix
  std::vector<bool> bad_fwd_, bad_fb_;
};

Block FourNodeRun::segment(const std::vector<Sym>& word, int link) const {
  Block b;
  for (int p : fm_.positions[link]) b.push_back(word[p]);
  return b;
}

Block FourNodeRun::feedback_word(const std::vector<Sym>& word) const {
  Block g;
  for (int i = 0; i < a_; ++i) {
    Block part = vec_mul(f_, segment(word, i), s_.enc.maps[i]);
    g.insert(g.end(), part.begin(), part.end());
  }
  return g;
}

std::optional<std::vector<Sym>> FourNodeRun::consistent(const std::vector<Sym>& word, const std::vector<int>& links) const {
  std::vector<int> ent;
  for (int i : links) ent.push_back(fm_.entry[i]);
  return checker_.consistent(word, checker_.positions_of(ent));
}

std::vector<Block> FourNodeRun::window_lists(const std::vector<Claim>& claims, const std::vector<Block>& honest_feedback) const {
  const int slots = a_ * m_, len = slot_length();
  auto serialize = [&](const std::vector<Claim>& list) {
    Block out(static_cast<size_t>(slots) * len, 0);
    for (size_t c = 0; c < list.size() && static_cast<int>(c) < slots; ++c) {
      Sym* p = out.data() + c * len;
      *p++ = 1;
      int r = list[c].round;
      for (int d = 0; d < round_digits_; ++d) {
        *p++ = static_cast<Sym>(r % f_.q());
        r /= static_cast<int>(f_.q());
      }
      *p++ = static_cast<Sym>(list[c].feedback);
      for (int i = 0; i < a_; ++i) *p++ = list[c].content.mask[i];
      for (int i = 0; i < h_; ++i) *p++ = list[c].content.copy[i];
    }
    return out;
  };
  const Block honest = serialize(claims);
  int framed = 0;
  while (framed < a_ - 1 && adv_.controls(fm_.ids[framed])) ++framed;
  std::vector<Claim> forged;
  for (int r = 0; r < opt_.rounds; ++r)
    for (int j = 0; j < m_; ++j) {
      Content c{std::vector<uint8_t>(a_, 0), honest_feedback[r]};
      c.mask[framed] = 1;
      forged.push_back({r, j, c});
    }
  const Block forged_list = serialize(forged);
  std::vector<Block> lists;
  for (int i = a_; i < a_ + b_; ++i) {
    if (!adv_.controls(fm_.ids[i])) {
      lists.push_back(honest);
      continue;
    }
    switch (adv_.mode_of(fm_.ids[i])) {
      case ClaimMode::Relay: lists.push_back(honest); break;
      case ClaimMode::Suppress: lists.push_back(Block(honest.size(), 0)); break;
      case ClaimMode::Forge: lists.push_back(forged_list); break;
    }
  }
  return lists;
}

std::vector<std::optional<Content>> FourNodeRun::parse_window(const Block& list) const {
  std::vector<std::optional<Content>> out(static_cast<size_t>(opt_.rounds) * m_);
  const int len = slot_length();
  for (size_t off = 0; off + len <= list.size(); off += len) {
    const Sym* p = list.data() + off;
    if (*p++ != 1) continue;
    int r = 0, scale = 1;
    for (int d = 0; d < round_digits_; ++d) {
      r += static_cast<int>(*p++) * scale;
      scale *= static_cast<int>(f_.q());
    }
    int j = static_cast<int>(*p++);
    if (r >= opt_.rounds || j >= m_) continue;
    Content c;
    for (int i = 0; i < a_; ++i) c.mask.push_back(*p++ != 0 ? 1 : 0);
    c.copy.assign(p, p + h_);
    if (std::none_of(c.mask.begin(), c.mask.end(), [](uint8_t x) { return x != 0; })) continue;
    auto& cell = out[static_cast<size_t>(r) * m_ + j];
    if (!cell) cell = c;
  }
  return out;
}

std::optional<std::vector<Sym>> FourNodeRun::fallback_decode(const std::vector<Sym>& word, const std::vector<int>& rem,
                                                             int zr) const {
  const int k = code_.k;
  std::optional<std::vector<Sym>> found;
  bool ambiguous = false;
  const int n = static_cast<int>(rem.size());
  for_each_combination(n, std::min(zr, n), [&](const std::vector<int>& pick) {
    std::vector<bool> in_support(a_ + b_, false);
    for (int i : pick) in_support[rem[i]] = true;
    std::vector<std::vector<Sym>> rows;
    std::vector<Sym> rhs;
    for (int i : rem) {
      if (!in_support[i]) {
        for (int p : fm_.positions[i]) {
          std::vector<Sym> row(k);
          for (int r = 0; r < k; ++r) row[r] = code_.generator.at(r, p);
          rows.push_back(row);
          rhs.push_back(word[p]);
        }
      } else if (i < a_) {
        Block target = vec_mul(f_, segment(word, i), s_.enc.maps[i]);
        for (int c = 0; c < gm_[i].cols; ++c) {
          std::vector<Sym> row(k);
          for (int r = 0; r < k; ++r) row[r] = gm_[i].at(r, c);
          rows.push_back(row);
          rhs.push_back(target[c]);
        }
      }
    }
    Matrix sys(static_cast<int>(rows.size()), k);
    for (size_t r = 0; r < rows.size(); ++r)
      for (int c = 0; c < k; ++c) sys.at(static_cast<int>(r), c) = rows[r][c];
    auto sol = solve(f_, sys, rhs);
    if (!sol) return true;
    if (rank(f_, sys) < k || (found && *found != *sol)) {
      ambiguous = true;
      return false;
    }
    found = sol;
    return true;
  });
  if (ambiguous) return std::nullopt;
  return found;
}

void FourNodeRun::mark_deviating(const std::vector<Sym>& word, const std::vector<Sym>& msg, std::vector<std::string>& newly) {
  auto cw = encode_flat(code_, msg);
  for (int i = 0; i < a_ + b_; ++i) {
    if (bad_fwd_[i]) continue;
    for (int p : fm_.positions[i])
      if (cw[p] != word[p]) {
        bad_fwd_[i] = true;
        newly.push_back(fm_.ids[i]);
        break;
      }
  }
}

std::optional<std::vector<Sym>> FourNodeRun::decode_round(int r, const std::vector<Sym>& word, const Block& g_hat,
                                                          const std::vector<std::vector<std::optional<Content>>>& shown,
                                                          std::vector<std::string>& newly, std::string& branch) {
  std::vector<bool> settled(m_, false);  // certain no-claim, or a verified claim already acted on
  while (true) {
    std::vector<int> rsa, rbt, rem;
    int identified = 0, removed_fb = 0, live_fb = 0;
    for (int i = 0; i < a_ + b_; ++i) {
      if (bad_fwd_[i]) {
        ++identified;
        continue;
      }
      (i < a_ ? rsa : rbt).push_back(i);
      rem.push_back(i);
    }
    for (int j = 0; j < m_; ++j) bad_fb_[j] ? ++removed_fb : ++live_fb;
    const int zr = inst_.z - identified - removed_fb;
    if (zr < 0) {
      branch = "budget-exceeded";
      return std::nullopt;
    }
    const int ar = static_cast<int>(rsa.size()), br = static_cast<int>(rbt.size());
    auto remove_fb = [&](int j) {
      bad_fb_[j] = true;
      newly.push_back(fb_ids_[j]);
    };
    auto decode_with_star = [&](const std::vector<int>& links, const char* name) -> std::optional<std::vector<Sym>> {
      auto msg = consistent(word, links);
      if (msg) {
        branch = name;
        mark_deviating(word, *msg, newly);
      }
      return msg;
    };

    bool changed = false;
    for (int j = 0; j < m_ && !changed; ++j) {
      if (bad_fb_[j] || settled[j]) continue;
      // Distinct contents on the remaining B->t links, in first-seen order.
      std::vector<std::optional<Content>> groups;
      std::vector<int> counts;
      std::vector<int> group_of(a_ + b_, -1);
      for (int i : rbt) {
        const auto& c = shown[i - a_][static_cast<size_t>(r) * m_ + j];
        int g = 0;
        while (g < static_cast<int>(groups.size()) && groups[g] != c) ++g;
        if (g == static_cast<int>(groups.size())) {
          groups.push_back(c);
          counts.push_back(0);
        }
        ++counts[g];
        group_of[i] = g;
      }
      int certain = -1;
      for (size_t g = 0; g < groups.size(); ++g)
        if (counts[g] > zr) certain = static_cast<int>(g);

      if (certain >= 0) {
        for (int i : rbt)
          if (group_of[i] != certain) {
            bad_fwd_[i] = true;
            newly.push_back(fm_.ids[i]);
            changed = true;
          }
        const auto& c = groups[certain];
        if (!c) {
          settled[j] = true;
        } else if (c->copy != g_hat) {
          remove_fb(j);
          changed = true;
        } else {
          for (int i : rsa)
            if (c->mask[i] && !bad_fwd_[i]) {
              bad_fwd_[i] = true;
              newly.push_back(fm_.ids[i]);
              changed = true;
            }
          settled[j] = true;
        }
        if (changed) branch = "claim";
        continue;
      }

      // No content is shown by more than the remaining budget.
      int n_y = 0;
      for (size_t g = 0; g < groups.size(); ++g)
        if (!groups[g]) n_y = counts[g];
      for (size_t g = 0; g < groups.size(); ++g) {
        const auto& c = groups[g];
        if (!c || c->copy != g_hat) continue;
        std::vector<int> trusted;
        int claimed = 0;
        for (int i : rsa) {
          if (c->mask[i])
            ++claimed;
          else
            trusted.push_back(i);
        }
        if (claimed == 0 || claimed > zr - (br - counts[g])) continue;
        if (auto msg = decode_with_star(trusted, "uncertain-claim")) return msg;
      }
      if (consistent(word, rsa)) {
        if (br <= zr) return decode_with_star(rsa, "uncertain-only-no-claim");
        if (n_y < br - zr) {
          remove_fb(j);
          branch = "uncertain-feedback-removed";
          changed = true;
          continue;
        }
        return decode_with_star(rsa, "uncertain-no-claim-majority");
      }
      if (br > zr) {
        remove_fb(j);
        branch = "uncertain-feedback-removed";
        changed = true;
        continue;
      }
      std::optional<std::vector<Sym>> msg;
      for_each_combination(ar, ar + br - zr, [&](const std::vector<int>& pick) {
        std::vector<int> links;
        for (int i : pick) links.push_back(rsa[i]);
        msg = decode_with_star(links, "uncertain-subset");
        return !msg;
      });
      if (msg) return msg;
      remove_fb(j);
      branch = "uncertain-feedback-removed";
      changed = true;
    }
    if (changed) continue;

    // No claim pending on any remaining feedback link.
    const int l1 = ar + br - zr + live_fb;
    if (l1 <= ar + br) {
      std::optional<std::vector<Sym>> first;
      bool agree = true;
      for_each_combination(ar + br, l1, [&](const std::vector<int>& pick) {
        std::vector<int> links;
        for (int i : pick) links.push_back(rem[i]);
        if (auto msg = consistent(word, links)) {
          if (!first) first = msg;
          else if (*first != *msg) agree = false;
        }
        return agree;
      });
      ensure(agree, "two consistent L1 sets decode differently");
      if (first) {
        branch = "L1";
        return first;
      }
    }
    if (br >= zr) {
      std::optional<std::vector<Sym>> msg;
      for_each_combination(br, br - zr, [&](const std::vector<int>& pick) {
        std::vector<int> links = rsa;
        for (int i : pick) links.push_back(rbt[i]);
        msg = consistent(word, links);
        return !msg;
      });
      if (msg) {
        branch = "L2";
        return msg;
      }
    }
    branch = "feedback-preserving-decoder";
    return fallback_decode(word, rem, zr);
  }
}

SimulationTrace FourNodeRun::run() {
  SimulationTrace tr;
  tr.protocol = "four-node";
  tr.instance = "four-node a=" + std::to_string(a_) + " b=" + std::to_string(b_) + " m=" + std::to_string(m_);
  tr.z = inst_.z;
  tr.q = f_.q();
  tr.seed = opt_.seed;
  tr.data_uses = opt_.rounds;
  tr.symbols_per_round = inst_.cz;
  const int k = code_.k;
  for (const auto& e : adv_.edges) {
    bool known = std::find(fm_.ids.begin(), fm_.ids.end(), e) != fm_.ids.end() ||
                 std::find(fb_ids_.begin(), fb_ids_.end(), e) != fb_ids_.end();
    if (!known) fail(ErrorKind::InvalidInput, "unknown-edge", e);
  }
  round_digits_ = 1;
  for (int64_t span = f_.q(); span < opt_.rounds; span *= f_.q()) ++round_digits_;
  bad_fwd_.assign(a_ + b_, false);
  bad_fb_.assign(m_, false);
  std::mt19937_64 rng(opt_.seed);

  auto add_error = [&](Block blk, const std::string& id, int r) {
    Block e = adv_.error_at(id, r);
    if (e.empty()) return blk;
    if (e.size() != blk.size()) fail(ErrorKind::InvalidInput, "layout-mismatch", "error block length on " + id);
    for (size_t i = 0; i < blk.size(); ++i) blk[i] = f_.add(blk[i], e[i]);
    return blk;
  };

  // Data rounds.
  std::vector<std::vector<Sym>> msgs, sent, words;
  std::vector<Block> g_hat;
  std::vector<std::vector<Block>> fb_recv;
  std::vector<Claim> claims;
  std::vector<std::vector<uint8_t>> guessed(m_, std::vector<uint8_t>(a_, 0));
  std::vector<int> claim_rounds;
  for (int r = 0; r < opt_.rounds; ++r) {
    std::vector<Sym> msg(k);
    for (auto& x : msg) x = static_cast<Sym>(rng() % f_.q());
    auto x = encode_flat(code_, msg);
    std::vector<Sym> y = x;
    for (int i = 0; i < a_ + b_; ++i) {
      Block seg = add_error(segment(x, i), fm_.ids[i], r);
      for (size_t p = 0; p < seg.size(); ++p) y[fm_.positions[i][p]] = seg[p];
    }
    const Block g_true = feedback_word(x);
    const Block g_a = feedback_word(y);
    std::vector<Block> recv;
    bool claimed = false;
    for (int j = 0; j < m_; ++j) {
      Block pj = add_error(g_a, fb_ids_[j], r);
      std::vector<uint8_t> mask(a_, 0);
      bool fresh = false;
      int off = 0;
      for (int i = 0; i < a_; ++i) {
        const int len = s_.enc.maps[i].cols;
        if (!std::equal(pj.begin() + off, pj.begin() + off + len, g_true.begin() + off)) {
          mask[i] = 1;
          if (!guessed[j][i]) fresh = true;
          guessed[j][i] = 1;
        }
        off += len;
      }
      if (fresh) {
        claims.push_back({r, j, {mask, pj}});
        claimed = true;
      }
      recv.push_back(std::move(pj));
    }
    if (claimed) ++tr.claim_events;
    msgs.push_back(std::move(msg));
    sent.push_back(std::move(x));
    words.push_back(std::move(y));
    g_hat.push_back(g_a);
    fb_recv.push_back(std::move(recv));
  }

  // One claim window after the data rounds; every B->t link repeats the whole list.
  std::vector<std::vector<std::optional<Content>>> shown;
  for (const auto& list : window_lists(claims, g_hat)) shown.push_back(parse_window(list));
  int64_t window_uses = 0;
  for (int i = a_; i < a_ + b_; ++i)
    window_uses = std::max<int64_t>(window_uses, (static_cast<int64_t>(a_) * m_ * slot_length() + fm_.caps[i] - 1) / fm_.caps[i]);
  tr.overhead_uses = window_uses;

  for (int r = 0; r < opt_.rounds; ++r) {
    std::vector<std::string> newly;
    std::string branch;
    auto decoded = decode_round(r, words[r], g_hat[r], shown, newly, branch);
    bool ok = decoded && *decoded == msgs[r];
    tr.all_correct = tr.all_correct && ok;
    for (const auto& id : newly) {
      tr.identified.push_back(id);
      if (!adv_.controls(id)) tr.false_accusation = true;
    }
    if (!opt_.record) continue;
    RoundRecord rec;
    rec.round = r;
    rec.message = msgs[r];
    for (int i = 0; i < a_ + b_; ++i) rec.tx[fm_.ids[i]] = segment(sent[r], i);
    rec.adversary_edges = adv_.edges;
    for (const auto& e : adv_.edges) {
      Block blk = adv_.error_at(e, r);
      if (!blk.empty()) rec.errors[e] = blk;
    }
    for (int j = 0; j < m_; ++j) rec.feedback[fb_ids_[j]] = fb_recv[r][j];
    for (const auto& c : claims) {
      if (c.round != r) continue;
      ordered_json cj;
      cj["feedback"] = fb_ids_[c.feedback];
      std::vector<std::string> xs;
      for (int i = 0; i < a_; ++i)
        if (c.content.mask[i]) xs.push_back(fm_.ids[i]);
      cj["X"] = xs;
      cj["P"] = c.content.copy;
      rec.claims.push_back(cj);
    }
    rec.identified = newly;
    rec.decoded = decoded;
    rec.branch = branch;
    rec.ok = ok;
    tr.rounds.push_back(std::move(rec));
  }
  return tr;
}

struct EdgeOption {
  Block error;
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

SimulationTrace simulate_four_node(const FourNodeSetup& setup, const AdversaryAction& adv, const SimOptions& opt) {
  adv.validate(setup.inst.z);
  if (setup.inst.cz == 0) {
    SimulationTrace tr;
    tr.protocol = "four-node";
    tr.z = setup.inst.z;
    tr.q = setup.field.q();
    tr.seed = opt.seed;
    tr.data_uses = opt.rounds;
    tr.note = "bound is 0: nothing to send";
    return tr;
  }
  FourNodeRun run(setup, adv, opt);
  return run.run();
}

SweepSummary sweep_four_node(const FourNodeSetup& setup, int rounds, uint64_t seed, int64_t value_cap) {
  const auto& inst = setup.inst;
  const uint32_t q = setup.field.q();
  const int h = setup.enc.feedback_length();
  std::mt19937_64 rng(seed);
  std::vector<std::string> ids;
  std::vector<std::vector<EdgeOption>> options;
  for (int e : inst.sa) {
    ids.push_back(inst.net.edge_id(e));
    std::vector<EdgeOption> opts;
    for (auto& b : error_values(q, static_cast<int>(inst.net.cap(e).value()), value_cap, rng)) opts.push_back({b});
    options.push_back(std::move(opts));
  }
  for (int e : inst.bt) {
    ids.push_back(inst.net.edge_id(e));
    std::vector<EdgeOption> opts{{{}, ClaimMode::Suppress}, {{}, ClaimMode::Forge}};
    for (auto& b : error_values(q, static_cast<int>(inst.net.cap(e).value()), value_cap, rng))
      for (auto mode : {ClaimMode::Relay, ClaimMode::Suppress, ClaimMode::Forge}) opts.push_back({b, mode});
    options.push_back(std::move(opts));
  }
  for (int e : inst.fb) {
    ids.push_back(inst.net.edge_id(e));
    std::vector<EdgeOption> opts;
    for (auto& b : error_values(q, h, value_cap, rng)) opts.push_back({b});
    options.push_back(std::move(opts));
  }

  SweepSummary sum;
  sum.fixture = "four-node a=" + std::to_string(inst.a()) + " b=" + std::to_string(inst.b()) + " m=" + std::to_string(inst.m());
  sum.z = inst.z;
  sum.q = q;
  sum.rounds = rounds;
  const SimOptions opt{rounds, seed, false};
  const int edges = static_cast<int>(ids.size());
  for (int size = 0; size <= std::min(inst.z, edges); ++size) {
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
        sum.absorb(simulate_four_node(setup, adv, opt), adv);
        int c = size - 1;
        while (c >= 0 && ++pick[c] == options[chosen[c]].size()) pick[c--] = 0;
        if (c < 0) break;
      }
      return true;
    });
  }
  return sum;
}

SweepSummary random_sweep_four_node(const FourNodeSetup& setup, int rounds, int runs, uint64_t seed) {
  const auto& inst = setup.inst;
  const uint32_t q = setup.field.q();
  std::mt19937_64 rng(seed);
  std::vector<std::string> ids;
  std::vector<int> lengths;
  std::vector<bool> carries_claims;
  auto add = [&](int e, int length, bool claims) {
    ids.push_back(inst.net.edge_id(e));
    lengths.push_back(length);
    carries_claims.push_back(claims);
  };
  for (int e : inst.sa) add(e, static_cast<int>(inst.net.cap(e).value()), false);
  for (int e : inst.bt) add(e, static_cast<int>(inst.net.cap(e).value()), true);
  for (int e : inst.fb) add(e, setup.enc.feedback_length(), false);
  SweepSummary sum;
  sum.fixture = "four-node a=" + std::to_string(inst.a()) + " b=" + std::to_string(inst.b()) + " m=" + std::to_string(inst.m());
  sum.z = inst.z;
  sum.q = q;
  sum.rounds = rounds;
  const int edges = static_cast<int>(ids.size());
  for (int run = 0; run < runs; ++run) {
    std::vector<int> order(edges);
    for (int i = 0; i < edges; ++i) order[i] = i;
    std::shuffle(order.begin(), order.end(), rng);
    const int size = static_cast<int>(rng() % (std::min(inst.z, edges) + 1));
    AdversaryAction adv;
    for (int c = 0; c < size; ++c) {
      const int e = order[c];
      adv.edges.push_back(ids[e]);
      std::vector<Block> seq;
      for (int r = 0; r < rounds; ++r) {
        Block b(lengths[e]);
        if (rng() % 4 != 0)
          for (auto& x : b) x = static_cast<Sym>(rng() % q);
        seq.push_back(std::move(b));
      }
      adv.errors[ids[e]] = seq;
      if (carries_claims[e]) adv.claim_mode[ids[e]] = static_cast<ClaimMode>(rng() % 3);
    }
    sum.absorb(simulate_four_node(setup, adv, {rounds, seed + static_cast<uint64_t>(run), false}), adv);
  }
  return sum;
}

}  // namespace nec

#include "nec/bounds.hpp"

#include <algorithm>
#include <bit>
#include <functional>
#include <limits>

#include "nec/error.hpp"

namespace nec {

const char* bound_name(BoundKind k) {
  switch (k) {
    case BoundKind::TwoNode: return "two_node";
    case BoundKind::Singleton: return "singleton";
    case BoundKind::Bound1: return "bound1";
    case BoundKind::Bound2: return "bound2";
    case BoundKind::Generalized: return "generalized";
  }
  return "?";
}

int64_t smallest_sum(std::vector<int64_t> caps, int p) {
  std::sort(caps.begin(), caps.end());
  int64_t s = 0;
  for (int i = 0; i < p && i < static_cast<int>(caps.size()); ++i) s += caps[i];
  return s;
}

BoundResult two_node_bound(const std::vector<int64_t>& caps, int m, int z) {
  int n = static_cast<int>(caps.size());
  BoundResult r;
  if (n <= 2 * z) return r;
  int p = n - 2 * std::max(z - m, 0);
  r.value = std::min(smallest_sum(caps, n - z), smallest_sum(caps, p));
  r.witness.adversaries = z;
  return r;
}

BoundResult two_node_bound(const Network& net, const Cut& cut, int z) {
  std::vector<int64_t> caps;
  for (int e : cut.forward) caps.push_back(net.cap(e).value());
  auto r = two_node_bound(caps, static_cast<int>(cut.feedback.size()), z);
  r.witness.cut = cut.source_side_ids(net);
  return r;
}

namespace {

using Mask = uint64_t;

int guard_size(const Cut& c, bool subsets_of_feedback) {
  return static_cast<int>(c.forward.size() + (subsets_of_feedback ? c.feedback.size() : 0));
}

int popcount(Mask m) { return std::popcount(m); }

// Local view of one cut: forward edges indexed 0..nf-1, feedback edges 0..nr-1.
struct CutView {
  const Network& net;
  const Cut& cut;
  int nf, nr;
  std::vector<int64_t> cap;
  std::vector<std::vector<int>> fclasses, rclasses;  // interchangeable parallel edges
  std::vector<Mask> dd;                              // forward i -> feedback directly downstream

  // Only the edge sets that get enumerated count against the guard.
  CutView(const Network& n, const Cut& c, const BoundLimits& lim, bool subsets_of_feedback)
      : net(n), cut(c), nf(static_cast<int>(c.forward.size())), nr(static_cast<int>(c.feedback.size())) {
    if (c.skippable) fail(ErrorKind::Precondition, "skippable-cut", "cut crosses an UNBOUNDED edge");
    int size = guard_size(c, subsets_of_feedback);
    if (size > lim.cutsize || nf > 64 || nr > 64)
      fail(ErrorKind::GuardLimit, "subset-explosion",
           std::to_string(size) + " enumerated crossing edges exceed limit " + std::to_string(lim.cutsize));
    for (int e : c.forward) cap.push_back(n.cap(e).value());
    fclasses = classes(c.forward);
    rclasses = classes(c.feedback);
    dd.assign(nf, 0);
    for (int i = 0; i < nf; ++i)
      for (int k = 0; k < nr; ++k)
        if (directly_downstream(n, c, c.feedback[k], c.forward[i])) dd[i] |= Mask{1} << k;
  }

  std::vector<std::vector<int>> classes(const std::vector<int>& edges) const {
    std::vector<std::vector<int>> out;
    for (int i = 0; i < static_cast<int>(edges.size()); ++i) {
      int e = edges[i];
      bool placed = false;
      for (auto& cls : out) {
        int f = edges[cls.front()];
        if (net.tail(f) == net.tail(e) && net.head(f) == net.head(e) && net.cap(f) == net.cap(e)) {
          cls.push_back(i);
          placed = true;
          break;
        }
      }
      if (!placed) out.push_back({i});
    }
    return out;
  }

  int64_t capacity(Mask m) const {
    int64_t s = 0;
    for (int i = 0; i < nf; ++i)
      if (m >> i & 1) s += cap[i];
    return s;
  }

  int64_t top_capacity(Mask m, int count) const {
    std::vector<int64_t> v;
    for (int i = 0; i < nf; ++i)
      if (m >> i & 1) v.push_back(cap[i]);
    std::sort(v.rbegin(), v.rend());
    int64_t s = 0;
    for (int i = 0; i < count && i < static_cast<int>(v.size()); ++i) s += v[i];
    return s;
  }

  std::vector<std::string> fwd_ids(Mask m) const {
    std::vector<std::string> out;
    for (int i = 0; i < nf; ++i)
      if (m >> i & 1) out.push_back(net.edge_id(cut.forward[i]));
    return out;
  }
  std::vector<std::string> fb_ids(Mask m) const {
    std::vector<std::string> out;
    for (int k = 0; k < nr; ++k)
      if (m >> k & 1) out.push_back(net.edge_id(cut.feedback[k]));
    return out;
  }
};

// Downstream structure after erasing some crossing edges.
struct Relation {
  std::vector<Mask> down;  // forward i -> forward edges downstream of i
  std::vector<Mask> upf;   // feedback k -> forward edges downstream of k
};

Relation relation(const CutView& v, Mask erased_fwd, Mask erased_fb) {
  std::vector<bool> erased(v.net.num_edges(), false);
  for (int i = 0; i < v.nf; ++i)
    if (erased_fwd >> i & 1) erased[v.cut.forward[i]] = true;
  for (int k = 0; k < v.nr; ++k)
    if (erased_fb >> k & 1) erased[v.cut.feedback[k]] = true;
  Reachability reach(v.net, erased);
  Relation r;
  r.down.assign(v.nf, 0);
  r.upf.assign(v.nr, 0);
  for (int i = 0; i < v.nf; ++i)
    for (int j = 0; j < v.nf; ++j)
      if (reach.is_downstream(v.cut.forward[j], v.cut.forward[i])) r.down[i] |= Mask{1} << j;
  for (int k = 0; k < v.nr; ++k)
    for (int j = 0; j < v.nf; ++j)
      if (reach.is_downstream(v.cut.forward[j], v.cut.feedback[k])) r.upf[k] |= Mask{1} << j;
  return r;
}

// Visits every selection of between lo and hi members, taking within each class the first
// members not yet used. Parallel edges are interchangeable, so this loses no optimum.
void choose(const std::vector<std::vector<int>>& classes, const std::vector<int>& used, int lo, int hi,
            const std::function<void(Mask, const std::vector<int>&)>& visit) {
  std::vector<int> taken(classes.size(), 0);
  std::function<void(size_t, int, Mask)> rec = [&](size_t c, int count, Mask m) {
    if (c == classes.size()) {
      if (count >= lo) visit(m, taken);
      return;
    }
    int avail = static_cast<int>(classes[c].size()) - used[c];
    Mask add = m;
    for (int t = 0; t <= avail && count + t <= hi; ++t) {
      taken[c] = t;
      rec(c + 1, count + t, add);
      if (t < avail) add |= Mask{1} << classes[c][used[c] + t];
    }
    taken[c] = 0;
  };
  rec(0, 0, 0);
}

std::vector<int> plus(const std::vector<int>& a, const std::vector<int>& b) {
  std::vector<int> r(a);
  for (size_t i = 0; i < r.size(); ++i) r[i] += b[i];
  return r;
}

bool downstream_condition(const Relation& rel, Mask alive, Mask s) {
  Mask rest = alive & ~s;
  for (Mask m = s; m; m &= m - 1)
    if (rel.down[std::countr_zero(m)] & rest) return false;
  return true;
}

struct SingletonBest {
  int64_t value;
  Mask set;
};

SingletonBest singleton_core(const CutView& v, const Relation& rel, Mask alive, const std::vector<int>& used, int zp) {
  if (popcount(alive) <= 2 * zp) return {0, alive};
  SingletonBest best{std::numeric_limits<int64_t>::max(), 0};
  choose(v.fclasses, used, 2 * zp, 2 * zp, [&](Mask s, const std::vector<int>&) {
    if (!downstream_condition(rel, alive, s)) return;
    int64_t val = v.capacity(alive & ~s);
    if (val < best.value) best = {val, s};
  });
  ensure(best.value != std::numeric_limits<int64_t>::max(), "no downstream-closed set of size 2z");
  return best;
}

Mask feedback_of(const CutView& v, const Relation& rel, Mask z, Mask target) {
  Mask w = 0;
  for (Mask m = z; m; m &= m - 1) w |= v.dd[std::countr_zero(m)];
  Mask out = 0;
  for (Mask m = w; m; m &= m - 1) {
    int k = std::countr_zero(m);
    if (rel.upf[k] & target) out |= Mask{1} << k;
  }
  return out;
}

struct PairBest {
  int64_t removed = -1;
  Mask z1 = 0, z2 = 0, w1 = 0, w2 = 0;
};

// Maximum capacity of Z1 u Z2 over admissible pairs inside `alive`; Z1, Z2 disjoint w.l.o.g.
PairBest pair_core(const CutView& v, const Relation& rel, Mask alive, const std::vector<int>& used, int zp,
                   int64_t floor_removed) {
  PairBest best;
  best.removed = -1;
  int64_t target = floor_removed;  // only strictly better than this is useful to the caller
  choose(v.fclasses, used, 0, zp, [&](Mask z2, const std::vector<int>& t2) {
    Mask w2 = feedback_of(v, rel, z2, alive & ~z2);
    if (popcount(z2) + popcount(w2) > zp) return;
    int64_t c2 = v.capacity(z2);
    if (c2 + v.top_capacity(alive & ~z2, zp) <= std::max(target, best.removed)) return;
    choose(v.fclasses, plus(used, t2), 0, zp, [&](Mask z1, const std::vector<int>&) {
      Mask rest = alive & ~z1 & ~z2;
      Mask w1 = feedback_of(v, rel, z1, rest);
      if (popcount(z1) + popcount(w1) > zp) return;
      int64_t removed = c2 + v.capacity(z1);
      if (removed > best.removed) best = {removed, z1, z2, w1, w2};
    });
  });
  return best;
}

Mask all_forward(const CutView& v) { return v.nf == 64 ? ~Mask{0} : (Mask{1} << v.nf) - 1; }

}  // namespace

BoundResult generalized_singleton(const Network& net, const Cut& cut, int z, const BoundLimits& lim) {
  CutView v(net, cut, lim, false);
  Relation rel = relation(v, 0, 0);
  auto best = singleton_core(v, rel, all_forward(v), std::vector<int>(v.fclasses.size(), 0), z);
  BoundResult r;
  r.value = best.value;
  r.witness.cut = cut.source_side_ids(net);
  r.witness.singleton_set = v.fwd_ids(best.set);
  r.witness.adversaries = z;
  return r;
}

BoundResult cutset_bound1(const Network& net, const Cut& cut, int z, const BoundLimits& lim) {
  CutView v(net, cut, lim, true);
  BoundResult r;
  r.value = std::numeric_limits<int64_t>::max();
  std::vector<int> none_f(v.fclasses.size(), 0), none_r(v.rclasses.size(), 0);
  for (int m = 0; m <= z; ++m)
    choose(v.rclasses, none_r, m, m, [&](Mask w, const std::vector<int>&) {
      for (int k = 0; k <= z - m; ++k)
        choose(v.fclasses, none_f, k, k, [&](Mask f, const std::vector<int>& tf) {
          Relation rel = relation(v, f, w);
          Mask alive = all_forward(v) & ~f;
          auto best = singleton_core(v, rel, alive, tf, z - m - k);
          if (best.value < r.value) {
            r.value = best.value;
            r.witness.erased_forward = v.fwd_ids(f);
            r.witness.erased_feedback = v.fb_ids(w);
            r.witness.singleton_set = v.fwd_ids(best.set);
            r.witness.adversaries = z - m - k;
          }
        });
    });
  r.witness.cut = cut.source_side_ids(net);
  return r;
}

BoundResult cutset_bound2(const Network& net, const Cut& cut, int z, const std::vector<int>& z1,
                          const std::vector<int>& z2) {
  BoundLimits lim;
  lim.cutsize = std::numeric_limits<int>::max();
  CutView v(net, cut, lim, false);
  auto local = [&](const std::vector<int>& edges) {
    Mask m = 0;
    for (int e : edges) {
      auto it = std::find(cut.forward.begin(), cut.forward.end(), e);
      if (it == cut.forward.end())
        fail(ErrorKind::Precondition, "not-forward", net.edge_id(e) + " is not a forward edge of the cut");
      m |= Mask{1} << (it - cut.forward.begin());
    }
    return m;
  };
  Mask m1 = local(z1), m2 = local(z2);
  Relation rel = relation(v, 0, 0);
  Mask rest = all_forward(v) & ~m1 & ~m2;
  Mask w1 = feedback_of(v, rel, m1, rest);
  Mask w2 = feedback_of(v, rel, m2, all_forward(v) & ~m2);
  if (popcount(m1) + popcount(w1) > z || popcount(m2) + popcount(w2) > z)
    fail(ErrorKind::Precondition, "inadmissible-witness", "|Z_i u W_i| exceeds z");
  BoundResult r;
  r.value = v.capacity(rest);
  r.witness = {cut.source_side_ids(net), {}, {}, {}, v.fwd_ids(m1), v.fwd_ids(m2), v.fb_ids(w1), v.fb_ids(w2), z};
  return r;
}

BoundResult cutset_bound2_opt(const Network& net, const Cut& cut, int z, const BoundLimits& lim) {
  CutView v(net, cut, lim, false);
  Relation rel = relation(v, 0, 0);
  Mask alive = all_forward(v);
  auto best = pair_core(v, rel, alive, std::vector<int>(v.fclasses.size(), 0), z, -1);
  BoundResult r;
  r.value = v.capacity(alive) - best.removed;
  r.witness = {cut.source_side_ids(net), {}, {}, {}, v.fwd_ids(best.z1), v.fwd_ids(best.z2),
               v.fb_ids(best.w1), v.fb_ids(best.w2), z};
  return r;
}

namespace {

BoundResult cut_generalized_below(const Network& net, const Cut& cut, int z, const BoundLimits& lim,
                                  int64_t incumbent) {
  CutView v(net, cut, lim, false);
  BoundResult r;
  r.value = incumbent;
  std::vector<int> none(v.fclasses.size(), 0);
  int64_t total = v.capacity(all_forward(v));
  for (int k = 0; k <= z; ++k)
    choose(v.fclasses, none, k, k, [&](Mask f, const std::vector<int>& tf) {
      Mask alive = all_forward(v) & ~f;
      int64_t base = total - v.capacity(f);
      if (base - v.top_capacity(alive, 2 * (z - k)) >= r.value) return;
      Relation rel = relation(v, f, 0);
      auto best = pair_core(v, rel, alive, tf, z - k, base - r.value);
      if (best.removed < 0) return;
      int64_t val = base - best.removed;
      if (val < r.value) {
        r.value = val;
        r.witness = {cut.source_side_ids(net), v.fwd_ids(f), {}, {}, v.fwd_ids(best.z1), v.fwd_ids(best.z2),
                     v.fb_ids(best.w1), v.fb_ids(best.w2), z - k};
      }
    });
  return r;
}

}  // namespace

BoundResult cut_generalized(const Network& net, const Cut& cut, int z, const BoundLimits& lim) {
  return cut_generalized_below(net, cut, z, lim, std::numeric_limits<int64_t>::max());
}

BoundResult min_over_cuts(const Network& net, int z, BoundKind kind, const BoundLimits& lim) {
  BoundResult best;
  best.value = std::numeric_limits<int64_t>::max();
  bool any = false;
  for (const auto& cut : enumerate_cuts(net, lim.nodes)) {
    if (cut.skippable) continue;
    if (kind != BoundKind::TwoNode && guard_size(cut, kind == BoundKind::Bound1) > lim.cutsize)
      fail(ErrorKind::GuardLimit, "subset-explosion",
           std::to_string(guard_size(cut, kind == BoundKind::Bound1)) + " enumerated crossing edges exceed limit " +
               std::to_string(lim.cutsize));
    any = true;
    BoundResult r;
    switch (kind) {
      case BoundKind::TwoNode: r = two_node_bound(net, cut, z); break;
      case BoundKind::Singleton: r = generalized_singleton(net, cut, z, lim); break;
      case BoundKind::Bound1: r = cutset_bound1(net, cut, z, lim); break;
      case BoundKind::Bound2: r = cutset_bound2_opt(net, cut, z, lim); break;
      case BoundKind::Generalized:
        r = cut_generalized_below(net, cut, z, lim, best.value);
        if (r.witness.cut.empty()) continue;  // nothing below the incumbent
        break;
    }
    if (r.value < best.value) best = r;
  }
  if (!any) fail(ErrorKind::Precondition, "no-finite-cut", "every cut crosses an UNBOUNDED edge");
  return best;
}

BoundResult generalized_bound(const Network& net, int z, const BoundLimits& lim) {
  return min_over_cuts(net, z, BoundKind::Generalized, lim);
}

// ---------------------------------------------------------------------------------------------
// Replay works from edge names with plain path searches, independent of the masks above.

namespace {

struct Named {
  const Network& net;
  Cut cut;
  std::vector<bool> erased;

  std::vector<int> idx(const std::vector<std::string>& names) const {
    std::vector<int> out;
    for (const auto& n : names) out.push_back(net.edge_index(n));
    return out;
  }
  bool in(const std::vector<int>& v, int e) const { return std::find(v.begin(), v.end(), e) != v.end(); }
  int64_t cap_of(const std::vector<int>& v) const {
    int64_t s = 0;
    for (int e : v) s += net.cap(e).value();
    return s;
  }
  std::vector<int> forward_minus(std::initializer_list<const std::vector<int>*> drop) const {
    std::vector<int> out;
    for (int e : cut.forward) {
      bool skip = false;
      for (auto* d : drop) skip = skip || in(*d, e);
      if (!skip) out.push_back(e);
    }
    return out;
  }
  // W_i: feedback directly downstream of some link of z and upstream of some link of target.
  std::vector<int> feedback_for(const std::vector<int>& z, const std::vector<int>& target) const {
    Reachability reach(net, erased);
    std::vector<int> out;
    for (int fb : cut.feedback) {
      bool direct = false, up = false;
      for (int e : z) direct = direct || directly_downstream(net, cut, fb, e, erased);
      for (int e : target) up = up || reach.is_downstream(e, fb);
      if (direct && up) out.push_back(fb);
    }
    return out;
  }
};

int64_t replay_pair(const Named& n, int zp, const std::vector<int>& alive, const std::vector<int>& z1,
                    const std::vector<int>& z2) {
  for (int e : z1) ensure(n.in(alive, e), "Z1 outside the cut");
  for (int e : z2) ensure(n.in(alive, e), "Z2 outside the cut");
  std::vector<int> rest, not_z2;
  for (int e : alive) {
    if (!n.in(z1, e) && !n.in(z2, e)) rest.push_back(e);
    if (!n.in(z2, e)) not_z2.push_back(e);
  }
  auto w1 = n.feedback_for(z1, rest), w2 = n.feedback_for(z2, not_z2);
  ensure(static_cast<int>(z1.size() + w1.size()) <= zp && static_cast<int>(z2.size() + w2.size()) <= zp,
         "witness pair is not admissible");
  return n.cap_of(rest);
}

}  // namespace

int64_t replay_witness(const Network& net, int z, BoundKind kind, const BoundWitness& w) {
  Named n{net, cut_from_ids(net, w.cut), std::vector<bool>(net.num_edges(), false)};
  auto f = n.idx(w.erased_forward), wf = n.idx(w.erased_feedback);
  for (int e : f) ensure(n.in(n.cut.forward, e), "erased forward edge not on cut");
  for (int e : wf) ensure(n.in(n.cut.feedback, e), "erased feedback edge not on cut");
  for (int e : f) n.erased[e] = true;
  for (int e : wf) n.erased[e] = true;
  std::vector<int> alive = n.forward_minus({&f});
  switch (kind) {
    case BoundKind::TwoNode: return two_node_bound(net, n.cut, z).value;
    case BoundKind::Singleton:
    case BoundKind::Bound1: {
      int zp = z - static_cast<int>(f.size() + wf.size());
      ensure(zp >= 0 && zp == w.adversaries, "erasures exceed budget");
      auto s = n.idx(w.singleton_set);
      if (static_cast<int>(alive.size()) <= 2 * zp) return 0;
      ensure(static_cast<int>(s.size()) == 2 * zp, "Singleton set has wrong size");
      Reachability reach(net, n.erased);
      std::vector<int> rest = n.forward_minus({&f, &s});
      for (int a : s) {
        ensure(n.in(alive, a), "Singleton set outside the cut");
        for (int b : rest) ensure(!reach.is_downstream(b, a), "downstream condition violated");
      }
      return n.cap_of(rest);
    }
    case BoundKind::Bound2:
    case BoundKind::Generalized: {
      ensure(wf.empty(), "feedback erasure in a pair witness");
      int zp = z - static_cast<int>(f.size());
      ensure(zp >= 0 && zp == w.adversaries, "erasures exceed budget");
      return replay_pair(n, zp, alive, n.idx(w.z1), n.idx(w.z2));
    }
  }
  return -1;
}

int64_t singleton_bruteforce(const Network& net, const Cut& cut, int z) {
  int nf = static_cast<int>(cut.forward.size());
  if (nf <= 2 * z) return 0;
  Reachability reach(net);
  int64_t best = std::numeric_limits<int64_t>::max();
  for (uint64_t s = 0; s < (uint64_t{1} << nf); ++s) {
    if (std::popcount(s) != 2 * z) continue;
    bool ok = true;
    int64_t rest = 0;
    for (int i = 0; i < nf && ok; ++i) {
      if (s >> i & 1) continue;
      rest += net.cap(cut.forward[i]).value();
      for (int j = 0; j < nf; ++j)
        if ((s >> j & 1) && reach.is_downstream(cut.forward[i], cut.forward[j])) ok = false;
    }
    if (ok) best = std::min(best, rest);
  }
  return best;
}

}  // namespace nec

#include "nec/feedback_lp.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>

#include "nec/error.hpp"

namespace nec {

std::string rational_string(const Rational& r) {
  const auto num = boost::multiprecision::numerator(r), den = boost::multiprecision::denominator(r);
  return den == 1 ? num.str() : num.str() + "/" + den.str();
}

int64_t FeedbackLpInstance::c1() const { return std::accumulate(sa_caps.begin(), sa_caps.end(), int64_t{0}); }

int64_t FeedbackLpInstance::total() const {
  return c1() + std::accumulate(bt_caps.begin(), bt_caps.end(), int64_t{0});
}

FeedbackLpInstance FeedbackLpInstance::from_four_node(const FourNodeInstance& inst) {
  FeedbackLpInstance lp;
  for (int e : inst.sa) {
    lp.sa_caps.push_back(inst.net.cap(e).value());
    lp.ids.push_back(inst.net.edge_id(e));
  }
  for (int e : inst.bt) {
    lp.bt_caps.push_back(inst.net.cap(e).value());
    lp.ids.push_back(inst.net.edge_id(e));
  }
  lp.z = inst.z;
  lp.m = inst.m();
  lp.cz = inst.cz;
  return lp;
}

namespace {

// sum over `vars` of f <= rhs, where vars is a bit set over the LP variables.
struct Row {
  uint64_t vars = 0;
  int64_t rhs = 0;
  std::string origin;
};

struct Model {
  int a = 0, n = 0, nv = 0;
  std::vector<int64_t> caps;
  std::vector<std::string> ids;
  std::vector<Row> rows;  // dominated duplicates removed, capacity bounds first
};

std::string set_name(const std::vector<std::string>& ids, const std::vector<int>& members) {
  std::string s = "{";
  for (size_t i = 0; i < members.size(); ++i) s += (i ? "," : "") + ids[members[i]];
  return s + "}";
}

Model build(const FeedbackLpInstance& inst, const LpOptions& opt) {
  if (inst.m < 1) fail(ErrorKind::InvalidInput, "invalid-instance", "at least one feedback link required");
  if (inst.z < 0 || inst.cz < 0 || inst.cz > inst.total())
    fail(ErrorKind::InvalidInput, "invalid-instance", "need z >= 0 and 0 <= C_z <= C");
  if (2 * inst.z > opt.max_double_budget)
    fail(ErrorKind::GuardLimit, "subset-explosion", "2z = " + std::to_string(2 * inst.z) + " exceeds " +
                                                        std::to_string(opt.max_double_budget));
  Model md;
  md.a = static_cast<int>(inst.sa_caps.size());
  md.n = md.a + static_cast<int>(inst.bt_caps.size());
  if (md.n > 64) fail(ErrorKind::GuardLimit, "subset-explosion", "more than 64 forward links");
  md.nv = opt.free_bt ? md.n : md.a;
  md.caps = inst.sa_caps;
  md.caps.insert(md.caps.end(), inst.bt_caps.begin(), inst.bt_caps.end());
  md.ids = inst.ids;
  if (md.ids.empty()) {
    for (int i = 0; i < md.a; ++i) md.ids.push_back("a" + std::to_string(i + 1));
    for (int i = md.a; i < md.n; ++i) md.ids.push_back("b" + std::to_string(i - md.a + 1));
  }
  const int64_t slack = inst.total() - inst.cz;
  std::map<uint64_t, Row> best;
  auto offer = [&](uint64_t vars, int64_t rhs, const std::string& origin) {
    auto it = best.find(vars);
    if (it == best.end() || rhs < it->second.rhs) best[vars] = {vars, rhs, origin};
  };
  // f(l) counts as a variable for l < nv, as the constant r(l) otherwise.
  auto split = [&](const std::vector<int>& set, uint64_t& vars, int64_t& fixed) {
    for (int l : set) {
      if (l < md.nv)
        vars |= uint64_t{1} << l;
      else
        fixed += md.caps[l];
    }
  };
  for (int size = 0; size <= std::min(2 * inst.z, md.n); ++size)
    for_each_combination(md.n, size, [&](const std::vector<int>& set) {
      uint64_t vars = 0;
      int64_t fixed = 0;
      split(set, vars, fixed);
      offer(vars, slack - fixed, "condition1 " + set_name(md.ids, set));
      return true;
    });
  const int n1_max = inst.z - inst.m;
  for (int s1 = 0; s1 <= std::min(n1_max, md.n); ++s1)
    for_each_combination(md.n, s1, [&](const std::vector<int>& n1) {
      int64_t r1 = 0;
      for (int l : n1) r1 += md.caps[l];
      std::vector<int> rest;
      for (int l = 0; l < md.n; ++l)
        if (std::find(n1.begin(), n1.end(), l) == n1.end()) rest.push_back(l);
      for (int s2 = 0; s2 <= std::min(inst.z, static_cast<int>(rest.size())); ++s2)
        for_each_combination(static_cast<int>(rest.size()), s2, [&](const std::vector<int>& idx) {
          std::vector<int> n2;
          for (int i : idx) n2.push_back(rest[i]);
          uint64_t vars = 0;
          int64_t fixed = r1;
          split(n2, vars, fixed);
          offer(vars, slack - fixed, "condition2 N1=" + set_name(md.ids, n1) + " N2=" + set_name(md.ids, n2));
          return true;
        });
      return true;
    });
  for (int v = 0; v < md.nv; ++v) md.rows.push_back({uint64_t{1} << v, md.caps[v], "capacity " + md.ids[v]});
  for (auto& [vars, row] : best) {
    if (row.rhs < 0) fail(ErrorKind::Infeasible, "infeasible", row.origin + " needs " + std::to_string(row.rhs) + " >= 0");
    if (vars == 0) continue;  // 0 <= rhs
    md.rows.push_back(row);
  }
  return md;
}

// Bland's-rule simplex: maximize sum of the first `a` variables, rows `sum <= rhs`, x >= 0, rhs >= 0.
std::vector<Rational> simplex(const Model& md) {
  const int nr = static_cast<int>(md.rows.size()), nv = md.nv, cols = nv + nr;
  std::vector<std::vector<Rational>> t(nr, std::vector<Rational>(cols + 1, 0));
  for (int i = 0; i < nr; ++i) {
    for (int v = 0; v < nv; ++v)
      if (md.rows[i].vars >> v & 1) t[i][v] = 1;
    t[i][nv + i] = 1;
    t[i][cols] = md.rows[i].rhs;
  }
  std::vector<Rational> obj(cols + 1, 0);  // reduced costs, negated objective
  for (int v = 0; v < md.a; ++v) obj[v] = -1;
  std::vector<int> basis(nr);
  std::iota(basis.begin(), basis.end(), nv);
  while (true) {
    int enter = -1;
    for (int j = 0; j < cols && enter < 0; ++j)
      if (obj[j] < 0) enter = j;
    if (enter < 0) break;
    int leave = -1;
    Rational ratio;
    for (int i = 0; i < nr; ++i) {
      if (t[i][enter] <= 0) continue;
      Rational r = t[i][cols] / t[i][enter];
      if (leave < 0 || r < ratio || (r == ratio && basis[i] < basis[leave])) {
        leave = i;
        ratio = r;
      }
    }
    ensure(leave >= 0, "feedback LP unbounded");
    const Rational piv = t[leave][enter];
    for (auto& x : t[leave]) x /= piv;
    for (int i = 0; i < nr; ++i) {
      if (i == leave || t[i][enter] == 0) continue;
      const Rational k = t[i][enter];
      for (int j = 0; j <= cols; ++j) t[i][j] -= k * t[leave][j];
    }
    if (obj[enter] != 0) {
      const Rational k = obj[enter];
      for (int j = 0; j <= cols; ++j) obj[j] -= k * t[leave][j];
    }
    basis[leave] = enter;
  }
  std::vector<Rational> x(nv, 0);
  for (int i = 0; i < nr; ++i)
    if (basis[i] < nv) x[basis[i]] = t[i][cols];
  return x;
}

}  // namespace

bool LpResult::integral() const {
  return std::all_of(f.begin(), f.end(), [](const Rational& r) { return boost::multiprecision::denominator(r) == 1; });
}

std::vector<int64_t> LpResult::integral_degrees(std::string* warning) const {
  std::vector<int64_t> out;
  std::string changed;
  for (int i = 0; i < sa_links; ++i) {
    const auto num = boost::multiprecision::numerator(f[i]);
    const auto den = boost::multiprecision::denominator(f[i]);
    out.push_back(static_cast<int64_t>(num / den));  // f >= 0, so this is the floor
    if (den != 1) changed += (changed.empty() ? "" : ", ") + rational_string(f[i]);
  }
  if (warning) *warning = changed.empty() ? "" : "fractional degrees rounded down: " + changed;
  return out;
}

nlohmann::ordered_json LpResult::to_json() const {
  nlohmann::ordered_json j;
  j["h"] = rational_string(h);
  std::vector<std::string> fs;
  for (const auto& r : f) fs.push_back(rational_string(r));
  j["f"] = fs;
  j["binding_constraints"] = binding;
  return j;
}

LpResult min_feedback_capacity(const FeedbackLpInstance& inst, const LpOptions& opt) {
  const Model md = build(inst, opt);
  const std::vector<Rational> x = simplex(md);
  LpResult res;
  res.constraints = static_cast<int>(md.rows.size());
  res.sa_links = md.a;
  for (int l = 0; l < md.n; ++l) res.f.push_back(l < md.nv ? x[l] : Rational(md.caps[l]));
  for (int v = 0; v < md.a; ++v) res.objective += x[v];
  res.h = Rational(inst.c1()) - res.objective;
  for (const auto& row : md.rows) {
    Rational lhs = 0;
    for (int v = 0; v < md.nv; ++v)
      if (row.vars >> v & 1) lhs += x[v];
    ensure(lhs <= row.rhs, "feedback LP solution violates " + row.origin);
    if (lhs == row.rhs) res.binding.push_back(row.origin);
  }
  return res;
}

std::vector<GridOptimum> grid_feedback_optimum(const FeedbackLpInstance& inst, int max_denominator,
                                               int64_t point_limit, const LpOptions& opt) {
  const Model md = build(inst, opt);
  std::vector<GridOptimum> out;
  for (int d = 1; d <= max_denominator; ++d) {
    int64_t points = 1;
    for (int v = 0; v < md.nv && points <= point_limit; ++v) points *= md.caps[v] * d + 1;
    if (points > point_limit) continue;
    // Depth-first over scaled integer degrees; coefficients are 0/1 and nonnegative, so partial sums prune.
    std::vector<int64_t> val(md.nv, 0), best_val;
    std::vector<int64_t> used(md.rows.size(), 0);
    int64_t best = -1;
    std::function<void(int, int64_t)> rec = [&](int v, int64_t objective) {
      if (v == md.nv) {
        if (objective > best) {
          best = objective;
          best_val = val;
        }
        return;
      }
      for (int64_t x = md.caps[v] * d; x >= 0; --x) {
        bool ok = true;
        for (size_t r = 0; r < md.rows.size(); ++r)
          if ((md.rows[r].vars >> v & 1) && used[r] + x > md.rows[r].rhs * d) ok = false;
        if (!ok) continue;
        for (size_t r = 0; r < md.rows.size(); ++r)
          if (md.rows[r].vars >> v & 1) used[r] += x;
        val[v] = x;
        rec(v + 1, objective + (v < md.a ? x : 0));
        for (size_t r = 0; r < md.rows.size(); ++r)
          if (md.rows[r].vars >> v & 1) used[r] -= x;
      }
    };
    rec(0, 0);
    GridOptimum g;
    g.denominator = d;
    g.objective = Rational(best, d);
    for (int l = 0; l < md.n; ++l) g.f.push_back(l < md.nv ? Rational(best_val[l], d) : Rational(md.caps[l]));
    out.push_back(std::move(g));
  }
  return out;
}

}  // namespace nec

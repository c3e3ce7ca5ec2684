#include "nec/adversary.hpp"

#include <algorithm>
#include <map>
#include <random>
#include <unordered_map>

#include "nec/bounds.hpp"
#include "nec/error.hpp"

namespace nec {

int error_weight(const ErrorVector& e) {
  int w = 0;
  for (const auto& b : e)
    if (std::any_of(b.begin(), b.end(), [](Sym s) { return s != 0; })) ++w;
  return w;
}

int NetworkCode::input_length(int e) const {
  int v = net.tail(e);
  int len = v == net.source() ? k : 0;
  for (int in : net.in_edges(v)) len += length[in];
  return len;
}

std::vector<int> default_lengths(const Network& net, int unbounded_length) {
  std::vector<int> len;
  for (const auto& e : net.edges()) len.push_back(e.cap.is_unbounded() ? unbounded_length : static_cast<int>(e.cap.value()));
  return len;
}

NetworkCode linear_network_code(const Network& net, const Field& f, int k, std::vector<int> length, std::vector<Matrix> maps) {
  NetworkCode c;
  c.net = net;
  c.field = f;
  c.k = k;
  c.length = std::move(length);
  if (static_cast<int>(c.length.size()) != net.num_edges() || static_cast<int>(maps.size()) != net.num_edges())
    fail(ErrorKind::InvalidInput, "layout-mismatch", "one block length and one map per edge required");
  for (int e = 0; e < net.num_edges(); ++e) {
    if (maps[e].rows != c.length[e] || maps[e].cols != c.input_length(e))
      fail(ErrorKind::InvalidInput, "layout-mismatch", "map shape on " + net.edge_id(e));
    c.adversarial.push_back(!net.cap(e).is_unbounded());
  }
  c.linear = std::move(maps);
  for (int e = 0; e < net.num_edges(); ++e) {
    const Matrix& m = c.linear[e];
    const Field fld = f;
    c.local.push_back([m, fld](const std::vector<Sym>& msg, const std::vector<Block>& inputs) {
      std::vector<Sym> x = msg;
      for (const auto& b : inputs) x.insert(x.end(), b.begin(), b.end());
      return mul(fld, m, x);
    });
  }
  return c;
}

NetworkCode random_linear_code(const Network& net, const Field& f, int k, std::vector<int> length, uint64_t seed) {
  std::mt19937_64 rng(seed);
  NetworkCode shape;
  shape.net = net;
  shape.k = k;
  shape.length = length;
  std::vector<Matrix> maps;
  for (int e = 0; e < net.num_edges(); ++e) {
    Matrix m(length[e], shape.input_length(e));
    for (auto& x : m.a) x = static_cast<Sym>(rng() % f.q());
    maps.push_back(std::move(m));
  }
  return linear_network_code(net, f, k, std::move(length), std::move(maps));
}

Evaluation evaluate_all(const NetworkCode& code, const std::vector<Sym>& w, const ErrorVector& errors) {
  const Network& net = code.net;
  if (static_cast<int>(w.size()) != code.k) fail(ErrorKind::InvalidInput, "layout-mismatch", "message length");
  if (!errors.empty() && static_cast<int>(errors.size()) != net.num_edges())
    fail(ErrorKind::InvalidInput, "layout-mismatch", "error vector must have one block per edge");
  Evaluation ev;
  ev.edges.assign(net.num_edges(), {});
  std::vector<Sym> none;
  for (int v : topological_order(net)) {
    std::vector<Block> inputs;
    for (int in : net.in_edges(v)) inputs.push_back(ev.edges[in]);
    for (int e : net.out_edges(v)) {
      Block out = code.local[e](v == net.source() ? w : none, inputs);
      if (static_cast<int>(out.size()) != code.length[e])
        fail(ErrorKind::InvalidInput, "layout-mismatch", "local map output length on " + net.edge_id(e));
      if (!errors.empty() && !errors[e].empty()) {
        if (errors[e].size() != out.size()) fail(ErrorKind::InvalidInput, "layout-mismatch", "error block length on " + net.edge_id(e));
        for (size_t i = 0; i < out.size(); ++i) out[i] = code.field.add(out[i], errors[e][i]);
      }
      ev.edges[e] = std::move(out);
    }
  }
  for (int in : net.in_edges(net.sink())) ev.sink.push_back(ev.edges[in]);
  return ev;
}

std::vector<Block> evaluate(const NetworkCode& code, const std::vector<Sym>& w, const ErrorVector& errors) {
  return evaluate_all(code, w, errors).sink;
}

namespace {

std::vector<int> adversarial_edges(const NetworkCode& code) {
  std::vector<int> out;
  for (int e = 0; e < code.net.num_edges(); ++e)
    if (code.adversarial.empty() || code.adversarial[e]) out.push_back(e);
  return out;
}

// Visit subsets of `items` with size 0..max_size in order of increasing size.
template <class Visit>
bool for_each_small_subset(const std::vector<int>& items, int max_size, Visit&& visit) {
  for (int s = 0; s <= max_size && s <= static_cast<int>(items.size()); ++s) {
    bool stop = false;
    for_each_combination(static_cast<int>(items.size()), s, [&](const std::vector<int>& idx) {
      std::vector<int> sub;
      for (int i : idx) sub.push_back(items[i]);
      stop = visit(sub);
      return !stop;
    });
    if (stop) return true;
  }
  return false;
}

uint64_t ipow(uint64_t b, int e, uint64_t cap) {
  uint64_t r = 1;
  for (int i = 0; i < e; ++i) {
    r *= b;
    if (r > cap) return cap + 1;
  }
  return r;
}

Matrix columns_matrix(const std::vector<std::vector<Sym>>& cols, int rows) {
  Matrix m(rows, static_cast<int>(cols.size()));
  for (int c = 0; c < m.cols; ++c)
    for (int r = 0; r < rows; ++r) m.at(r, c) = cols[c][r];
  return m;
}

}  // namespace

Matrix message_transfer(const NetworkCode& code) {
  if (!code.is_linear()) fail(ErrorKind::Precondition, "not-linear", "transfer matrices need a linear code");
  std::vector<std::vector<Sym>> cols;
  for (int i = 0; i < code.k; ++i) {
    std::vector<Sym> w(code.k, 0);
    w[i] = 1;
    cols.push_back(flatten(evaluate(code, w, {})));
  }
  const int rows = static_cast<int>(flatten(evaluate(code, std::vector<Sym>(code.k, 0), {})).size());
  return columns_matrix(cols, rows);
}

Matrix error_transfer(const NetworkCode& code, int edge) {
  if (!code.is_linear()) fail(ErrorKind::Precondition, "not-linear", "transfer matrices need a linear code");
  std::vector<std::vector<Sym>> cols;
  const std::vector<Sym> zero(code.k, 0);
  for (int j = 0; j < code.length[edge]; ++j) {
    ErrorVector err(code.net.num_edges());
    err[edge].assign(code.length[edge], 0);
    err[edge][j] = 1;
    cols.push_back(flatten(evaluate(code, zero, err)));
  }
  const int rows = static_cast<int>(flatten(evaluate(code, zero, {})).size());
  return columns_matrix(cols, rows);
}

std::optional<std::vector<Sym>> decode_linear(const NetworkCode& code, const std::vector<Block>& sink, int z) {
  const Matrix phi = message_transfer(code);
  std::map<int, Matrix> theta;
  const auto adv = adversarial_edges(code);
  for (int e : adv) theta[e] = error_transfer(code, e);
  const std::vector<Sym> y = flatten(sink);
  std::optional<std::vector<Sym>> out;
  for_each_small_subset(adv, z, [&](const std::vector<int>& u) {
    int cols = code.k;
    for (int e : u) cols += code.length[e];
    Matrix m(phi.rows, cols);
    for (int r = 0; r < phi.rows; ++r) {
      int c = 0;
      for (int i = 0; i < code.k; ++i) m.at(r, c++) = phi.at(r, i);
      for (int e : u)
        for (int j = 0; j < theta[e].cols; ++j) m.at(r, c++) = theta[e].at(r, j);
    }
    if (auto x = solve(code.field, m, y)) {
      out.emplace(x->begin(), x->begin() + code.k);
      return true;
    }
    return false;
  });
  return out;
}

namespace {

std::optional<Confusable> find_confusable_linear(const NetworkCode& code, int z, uint64_t limit) {
  const Field& f = code.field;
  const Network& net = code.net;
  ErrorVector zero_err;
  auto column = [&](const std::vector<Sym>& w, const ErrorVector& e) { return flatten(evaluate(code, w, e)); };
  int obs_len = static_cast<int>(column(std::vector<Sym>(code.k, 0), zero_err).size());
  std::vector<std::vector<Sym>> phi;  // one column per message symbol
  for (int i = 0; i < code.k; ++i) {
    std::vector<Sym> w(code.k, 0);
    w[i] = 1;
    phi.push_back(column(w, zero_err));
  }
  std::map<int, std::vector<std::vector<Sym>>> theta;  // per edge, one column per error symbol
  auto adv = adversarial_edges(code);
  for (int e : adv)
    for (int j = 0; j < code.length[e]; ++j) {
      ErrorVector err(net.num_edges());
      err[e].assign(code.length[e], 0);
      err[e][j] = 1;
      theta[e].push_back(column(std::vector<Sym>(code.k, 0), err));
    }
  uint64_t subsets = 0;
  for (int s = 0; s <= 2 * z; ++s) {
    uint64_t c = 1;
    for (int i = 0; i < s; ++i) c = c * (adv.size() - i) / (i + 1);
    subsets += c;
  }
  if (subsets > limit) fail(ErrorKind::GuardLimit, "search-space-limit", std::to_string(subsets) + " supports");
  std::optional<Confusable> found;
  for_each_small_subset(adv, 2 * z, [&](const std::vector<int>& u) {
    int cols = code.k;
    for (int e : u) cols += code.length[e];
    Matrix m(obs_len, cols);
    int c = 0;
    for (const auto& col : phi) {
      for (int r = 0; r < obs_len; ++r) m.at(r, c) = col[r];
      ++c;
    }
    for (int e : u)
      for (const auto& col : theta[e]) {
        for (int r = 0; r < obs_len; ++r) m.at(r, c) = col[r];
        ++c;
      }
    for (const auto& v : nullspace(f, m)) {
      if (std::all_of(v.begin(), v.begin() + code.k, [](Sym s) { return s == 0; })) continue;
      Confusable cf;
      cf.w.assign(v.begin(), v.begin() + code.k);
      cf.w_prime.assign(code.k, 0);
      cf.e.assign(net.num_edges(), {});
      cf.e_prime.assign(net.num_edges(), {});
      int pos = code.k;
      for (size_t i = 0; i < u.size(); ++i) {
        int e = u[i];
        Block b(v.begin() + pos, v.begin() + pos + code.length[e]);
        pos += code.length[e];
        if (static_cast<int>(i) < z) {
          cf.e[e] = b;
        } else {
          for (auto& s : b) s = f.neg(s);
          cf.e_prime[e] = b;
        }
      }
      cf.sink_observation = evaluate(code, cf.w, cf.e);
      ensure(cf.sink_observation == evaluate(code, cf.w_prime, cf.e_prime), "linear confusable witness does not replay");
      found = cf;
      return true;
    }
    return false;
  });
  return found;
}

}  // namespace

std::optional<Confusable> find_confusable_enumerative(const NetworkCode& code, int z, uint64_t limit) {
  const Network& net = code.net;
  const uint32_t q = code.field.q();
  auto adv = adversarial_edges(code);
  uint64_t messages = ipow(q, code.k, limit);
  uint64_t actions = 0;
  for_each_small_subset(adv, z, [&](const std::vector<int>& s) {
    uint64_t a = 1;
    for (int e : s) a *= ipow(q, code.length[e], limit) - 1;
    actions += a;
    return actions > limit;
  });
  if (messages > limit || actions > limit || messages * actions > limit)
    fail(ErrorKind::GuardLimit, "search-space-limit", std::to_string(messages) + " messages x " + std::to_string(actions) + " actions");
  struct Seen {
    std::vector<Sym> w;
    ErrorVector e;
  };
  std::unordered_map<std::string, Seen> table;
  std::optional<Confusable> found;
  std::vector<Sym> w(code.k, 0);
  for (uint64_t wi = 0; wi < messages && !found; ++wi) {
    uint64_t x = wi;
    for (int i = 0; i < code.k; ++i) {
      w[i] = static_cast<Sym>(x % q);
      x /= q;
    }
    for_each_small_subset(adv, z, [&](const std::vector<int>& s) {
      // Odometer over nonzero blocks on the chosen edges.
      std::vector<uint64_t> val(s.size(), 1), top;
      for (int e : s) top.push_back(ipow(q, code.length[e], limit));
      while (true) {
        ErrorVector err(net.num_edges());
        for (size_t i = 0; i < s.size(); ++i) {
          uint64_t y = val[i];
          for (int j = 0; j < code.length[s[i]]; ++j) {
            err[s[i]].push_back(static_cast<Sym>(y % q));
            y /= q;
          }
        }
        auto obs = evaluate(code, w, err);
        std::string key;
        for (const auto& b : obs)
          for (Sym sy : b) key += std::to_string(sy) + ",";
        auto it = table.find(key);
        if (it == table.end()) {
          table.emplace(key, Seen{w, err});
        } else if (it->second.w != w) {
          found = Confusable{it->second.w, w, it->second.e, err, obs};
          return true;
        }
        size_t i = 0;
        while (i < s.size() && ++val[i] == top[i]) val[i++] = 1;
        if (i == s.size()) break;
      }
      return false;
    });
  }
  if (found) {
    for (auto* ev : {&found->e, &found->e_prime})
      for (auto& b : *ev)
        if (std::all_of(b.begin(), b.end(), [](Sym s) { return s == 0; })) b.clear();
  }
  return found;
}

std::optional<Confusable> find_confusable(const NetworkCode& code, int z, uint64_t limit) {
  if (code.is_linear()) return find_confusable_linear(code, z, limit);
  return find_confusable_enumerative(code, z, limit);
}

namespace {

// Largest clique containing word 0 in the graph "link-Hamming distance >= d", up to `target`.
class CodebookSearch {
 public:
  CodebookSearch(const std::vector<int64_t>& alphabet, int min_distance) {
    int64_t total = 1;
    for (auto a : alphabet) total *= a;
    words_.resize(total);
    for (int64_t i = 0; i < total; ++i) {
      int64_t x = i;
      for (auto a : alphabet) {
        words_[i].push_back(static_cast<int>(x % a));
        x /= a;
      }
    }
    int n = static_cast<int>(total);
    adj_.assign(n, std::vector<bool>(n, false));
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        int d = 0;
        for (size_t p = 0; p < alphabet.size(); ++p) d += words_[i][p] != words_[j][p];
        adj_[i][j] = i != j && d >= min_distance;
      }
  }

  // True iff a codebook of `size` words exists.
  bool exists(int64_t size) {
    if (size <= 1) return true;
    std::vector<int> cand;
    for (int j = 1; j < static_cast<int>(words_.size()); ++j)
      if (adj_[0][j]) cand.push_back(j);
    return extend(cand, 1, size);
  }

 private:
  bool extend(const std::vector<int>& cand, int64_t have, int64_t want) {
    if (have >= want) return true;
    if (have + static_cast<int64_t>(cand.size()) < want) return false;
    for (size_t i = 0; i < cand.size(); ++i) {
      if (have + static_cast<int64_t>(cand.size() - i) < want) return false;
      std::vector<int> next;
      for (size_t j = i + 1; j < cand.size(); ++j)
        if (adj_[cand[i]][cand[j]]) next.push_back(cand[j]);
      if (extend(next, have + 1, want)) return true;
    }
    return false;
  }

  std::vector<std::vector<int>> words_;
  std::vector<std::vector<bool>> adj_;
};

void check_oracle_limits(int64_t total_cap, uint32_t q) {
  if (total_cap > 6 || q > 3)
    fail(ErrorKind::GuardLimit, "instance-too-large", "oracle needs total capacity <= 6 and q <= 3");
  if (!is_prime(q)) fail(ErrorKind::InvalidInput, "non-prime-modulus", std::to_string(q));
}

OracleResult parallel_links_oracle(const std::vector<int64_t>& caps, int z, uint32_t q) {
  int64_t total = 0;
  for (auto c : caps) total += c;
  check_oracle_limits(total, q);
  std::vector<int64_t> alphabet;
  for (auto c : caps) alphabet.push_back(static_cast<int64_t>(ipow(q, static_cast<int>(c), 1 << 20)));
  CodebookSearch search(alphabet, 2 * z + 1);
  OracleResult r;
  r.mode = "nonlinear-codebook";
  for (int k = static_cast<int>(total); k >= 0; --k)
    if (search.exists(static_cast<int64_t>(ipow(q, k, 1 << 20)))) {
      r.k = k;
      break;
    }
  // Largest codebook size, for reporting the gap between block length 1 and integer k.
  int64_t size = static_cast<int64_t>(ipow(q, r.k, 1 << 20));
  while (size < static_cast<int64_t>(ipow(q, static_cast<int>(total), 1 << 20)) && search.exists(size + 1)) ++size;
  r.max_codebook = size;
  return r;
}

}  // namespace

OracleResult micro_capacity_oracle(const TwoNodeNetwork& net, uint32_t q) {
  net.validate();
  // One round: the feedback links only carry information back after the single forward use.
  return parallel_links_oracle(net.forward_caps, net.z, q);
}

OracleResult micro_capacity_oracle(const Network& net, int z, uint32_t q) {
  bool parallel = true;
  std::vector<int64_t> caps;
  for (int e = 0; e < net.num_edges(); ++e) {
    if (net.cap(e).is_unbounded()) fail(ErrorKind::GuardLimit, "instance-too-large", "oracle needs finite capacities");
    if (net.tail(e) != net.source() || net.head(e) != net.sink()) parallel = false;
    caps.push_back(net.cap(e).value());
  }
  if (parallel) return parallel_links_oracle(caps, z, q);
  auto mc = min_cut_value(net);
  check_oracle_limits(mc.value_or(0), q);
  Field f(q);
  auto length = default_lengths(net, 0);
  OracleResult r;
  r.mode = "linear";
  for (int k = static_cast<int>(std::min<int64_t>(3, *mc)); k >= 1; --k) {
    NetworkCode shape;
    shape.net = net;
    shape.k = k;
    shape.length = length;
    int coeffs = 0;
    for (int e = 0; e < net.num_edges(); ++e) coeffs += length[e] * shape.input_length(e);
    uint64_t codes = ipow(q, coeffs, 1 << 22);
    if (codes > (1u << 22)) fail(ErrorKind::GuardLimit, "instance-too-large", std::to_string(coeffs) + " coding coefficients");
    for (uint64_t idx = 0; idx < codes; ++idx) {
      uint64_t x = idx;
      std::vector<Matrix> maps;
      for (int e = 0; e < net.num_edges(); ++e) {
        Matrix m(length[e], shape.input_length(e));
        for (auto& s : m.a) {
          s = static_cast<Sym>(x % q);
          x /= q;
        }
        maps.push_back(std::move(m));
      }
      auto code = linear_network_code(net, f, k, length, std::move(maps));
      if (!find_confusable(code, z)) {
        r.k = k;
        r.max_codebook = static_cast<int64_t>(ipow(q, k, 1 << 20));
        return r;
      }
    }
  }
  r.max_codebook = 1;
  return r;
}

}  // namespace nec

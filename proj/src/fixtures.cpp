#include "nec/fixtures.hpp"

#include <random>

#include "nec/error.hpp"

namespace nec {
namespace {

struct Builder {
  std::vector<std::string> nodes;
  std::vector<Edge> edges;

  Builder(std::initializer_list<const char*> ns) {
    for (auto n : ns) nodes.emplace_back(n);
  }
  void add(const std::string& id, const std::string& from, const std::string& to, int64_t cap) {
    edges.push_back({id, from, to, Capacity::finite(cap)});
  }
  void inf(const std::string& id, const std::string& from, const std::string& to) {
    edges.push_back({id, from, to, Capacity::unbounded()});
  }
  // Consecutive ids prefixN..prefix(N+caps-1).
  void bundle(const std::string& prefix, int first, const std::string& from, const std::string& to,
              std::initializer_list<int64_t> caps) {
    int i = first;
    for (auto c : caps) add(prefix + std::to_string(i++), from, to, c);
  }
  Network done() { return Network::build(nodes, edges, "s", "t"); }
};

// Four-node layout shared by most cut examples: s->B and A->t reliable.
Builder four_node() {
  Builder b{"s", "A", "B", "t"};
  b.inf("sB", "s", "B");
  b.inf("At", "A", "t");
  return b;
}

Fixture fig4() {
  auto b = four_node();
  b.bundle("l", 1, "s", "A", {1, 1});
  b.bundle("l", 3, "B", "t", {10, 10, 10, 10});
  b.bundle("f", 1, "A", "B", {1, 1, 1});
  return {"fig4", b.done(), 2, {"s", "B"}, {{"two_node", 22}, {"singleton", 2}}, "feedback capacities not drawn; set to 1"};
}

Fixture fig5a() {
  auto b = four_node();
  b.bundle("l", 1, "s", "A", {10, 10});
  b.bundle("l", 3, "B", "t", {1, 1, 1, 1});
  b.bundle("f", 1, "A", "B", {1, 1, 1});
  return {"fig5a", b.done(), 2, {"s", "B"}, {{"singleton", 20}, {"bound1", 4}}, "feedback count drawn with ellipsis; 3 links of capacity 1"};
}

Fixture fig5b() {
  auto b = four_node();
  b.bundle("l", 1, "s", "A", {3, 3, 3, 3, 3});
  b.bundle("l", 6, "B", "t", {2, 2, 1, 1, 1});
  b.bundle("f", 1, "A", "B", {1, 1, 1});
  return {"fig5b", b.done(), 2, {"s", "B"}, {{"singleton", 16}, {"bound1", 15}}, "feedback count drawn with ellipsis; 3 links of capacity 1"};
}

Fixture fig6() {
  Builder b{"s", "A", "B", "C", "D", "t"};
  b.add("l1", "s", "A", 6);
  b.bundle("a", 2, "s", "A", {2, 2, 1, 1});
  b.bundle("l", 2, "B", "C", {3, 3, 3, 3});
  b.add("b6", "B", "C", 3);
  b.bundle("d", 1, "D", "t", {2, 2, 1, 1, 1, 1, 1, 1});
  b.bundle("w", 1, "A", "B", {1, 1, 1, 1, 1});
  b.add("l6", "C", "D", 1);
  b.inf("sB", "s", "B");
  b.inf("BD", "B", "D");
  b.inf("AC", "A", "C");
  b.inf("Ct", "C", "t");
  return {"fig6", b.done(), 4, {"s", "B", "D"}, {{"min_cut", 37}, {"singleton", 27}, {"bound1", 19}},
          "two-layer zig-zag; A->B drawn as 'sufficiently many' links, 5 used"};
}

Fixture fig7() {
  auto b = four_node();
  b.bundle("l", 1, "s", "A", {2, 2, 2, 2});
  b.add("l5", "A", "B", 1);
  b.bundle("l", 6, "B", "t", {2, 2, 2, 1, 1, 1, 1});
  return {"fig7", b.done(), 3, {"s", "B"}, {{"bound1", 9}, {"bound2", 8}},
          "B->t capacities follow the per-edge labels (2,2,2,1,1,1,1), not the caption"};
}

Fixture fig8() {
  Builder b{"s", "U1", "U2", "U3", "Y1", "Y2", "Y3", "Y4", "t"};
  b.add("l1", "s", "U1", 2);
  b.add("l2", "s", "U2", 2);
  b.add("l3", "s", "U3", 2);
  b.add("l4", "U1", "Y1", 1);
  b.add("l5", "U1", "Y2", 1);
  b.add("l6", "U2", "Y2", 1);
  b.add("l7", "U2", "Y3", 1);
  b.add("l8", "U3", "Y3", 1);
  b.add("l9", "U3", "Y4", 1);
  b.add("l10", "Y1", "t", 1);
  b.add("l11", "Y2", "t", 1);
  b.add("l12", "Y3", "t", 1);
  b.add("l13", "Y4", "t", 1);
  return {"fig8", b.done(), 1, {}, {{"generalized", 2}}, ""};
}

Fixture fig9() {
  Builder b{"s", "X1", "X2", "X3", "X4", "Y1", "Y2", "Y3", "Y4", "Y5", "Y6", "t"};
  for (int i = 1; i <= 4; ++i) b.add("l" + std::to_string(i), "s", "X" + std::to_string(i), 4);
  const int targets[4][4] = {{1, 2, 3, 4}, {1, 2, 3, 4}, {3, 4, 5, 6}, {3, 4, 5, 6}};
  for (int i = 0; i < 4; ++i)
    for (int y : targets[i])
      b.add("x" + std::to_string(i + 1) + "y" + std::to_string(y), "X" + std::to_string(i + 1), "Y" + std::to_string(y), 1);
  for (int y = 1; y <= 6; ++y) b.add("l" + std::to_string(y + 4), "Y" + std::to_string(y), "t", 2);
  return {"fig9", b.done(), 1, {}, {{"generalized", 8}}, ""};
}

Fixture fig10() {
  Builder b{"s", "X1", "X2", "X3", "X4", "X5", "X6", "Y1", "Y2", "Y3", "Y4", "t"};
  for (int i = 1; i <= 6; ++i) b.add("l" + std::to_string(i), "s", "X" + std::to_string(i), 1);
  const std::vector<std::vector<int>> targets{{1, 2}, {1, 2, 3}, {1, 3, 4}, {2, 3, 4}, {3, 4}, {4}};
  for (int i = 0; i < 6; ++i)
    for (int y : targets[i])
      b.add("x" + std::to_string(i + 1) + "y" + std::to_string(y), "X" + std::to_string(i + 1), "Y" + std::to_string(y), 1);
  for (int y = 1; y <= 4; ++y) b.add("l" + std::to_string(y + 6), "Y" + std::to_string(y), "t", 2);
  return {"fig10", b.done(), 1, {}, {{"generalized", 4}}, ""};
}

Fixture fig11() {
  auto b = four_node();
  b.bundle("l", 1, "s", "A", {2, 2, 2});
  b.bundle("l", 4, "B", "t", {1, 1, 1, 1, 1});
  b.add("l9", "A", "B", 6);
  return {"fig11", b.done(), 2, {"s", "B"}, {{"generalized", 7}}, ""};
}

Fixture fig14a() {
  auto b = four_node();
  b.bundle("l", 1, "s", "A", {2, 2, 2});
  b.bundle("l", 4, "B", "t", {1, 1, 1, 1});
  b.add("l8", "A", "B", 3);
  return {"fig14a", b.done(), 2, {"s", "B"}, {{"generalized", 6}, {"lp_h", 3}}, ""};
}

Fixture fig14b() {
  auto b = four_node();
  b.bundle("l", 1, "s", "A", {6, 6, 4, 4, 3});
  b.bundle("l", 6, "B", "t", {1, 1, 1, 1, 1, 1});
  b.add("l12", "A", "B", 5);
  return {"fig14b", b.done(), 3, {"s", "B"}, {{"generalized", 9}, {"lp_h", 5}}, ""};
}

}  // namespace

const std::vector<Fixture>& all_fixtures() {
  static const std::vector<Fixture> list = {fig4(), fig5a(), fig5b(), fig6(), fig7(),  fig8(),
                                            fig9(), fig10(), fig11(), fig14a(), fig14b()};
  return list;
}

const Fixture& fixture(const std::string& id) {
  for (const auto& f : all_fixtures())
    if (f.id == id) return f;
  fail(ErrorKind::InvalidInput, "unknown-fixture", id);
}

Network random_network(uint64_t seed, int max_nodes, int max_cap) {
  std::mt19937_64 rng(seed);
  auto pick = [&](int lo, int hi) { return lo + static_cast<int>(rng() % static_cast<uint64_t>(hi - lo + 1)); };
  int mid = pick(0, max_nodes - 2);
  std::vector<std::string> order{"s"};
  for (int i = 0; i < mid; ++i) order.push_back("n" + std::to_string(i + 1));
  order.push_back("t");
  // Shuffle the intermediate nodes so that ids do not follow the topological order.
  for (int i = mid; i > 1; --i) std::swap(order[i], order[pick(1, i)]);
  std::vector<Edge> edges;
  int next = 0;
  for (size_t i = 0; i < order.size(); ++i)
    for (size_t j = i + 1; j < order.size(); ++j) {
      int mult = pick(0, 5);
      mult = mult < 3 ? 0 : mult - 2;  // 0 with probability 1/2, else 1..3 parallel links
      for (int k = 0; k < mult; ++k)
        edges.push_back({"e" + std::to_string(next++), order[i], order[j], Capacity::finite(pick(1, max_cap))});
    }
  // Guarantee a path s -> ... -> t along the order.
  for (size_t i = 0; i + 1 < order.size(); ++i)
    if (pick(0, 2) == 0) edges.push_back({"e" + std::to_string(next++), order[i], order[i + 1], Capacity::finite(pick(1, max_cap))});
  edges.push_back({"e" + std::to_string(next++), "s", "t", Capacity::finite(pick(1, max_cap))});
  std::vector<std::string> nodes(order.begin(), order.end());
  return Network::build(nodes, edges, "s", "t");
}

}  // namespace nec

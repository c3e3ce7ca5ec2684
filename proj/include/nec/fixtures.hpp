#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "nec/network.hpp"

namespace nec {

struct Fixture {
  std::string id;
  Network network;
  int z = 0;
  std::vector<std::string> drawn_cut;  // source side of the cut marked in the figure
  std::map<std::string, int64_t> expected;
  std::string note;
};

const Fixture& fixture(const std::string& id);  // throws unknown-fixture
const std::vector<Fixture>& all_fixtures();

// Random acyclic network with 2..max_nodes nodes and finite capacities in [1, max_cap].
Network random_network(uint64_t seed, int max_nodes, int max_cap);

}  // namespace nec

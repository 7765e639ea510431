#pragma once

#include <cstdint>
#include <vector>

#include "rewirelab/graph.hpp"

namespace rwl::community {

/// Louvain modularity maximization. The node visit order of every level is
/// shuffled from `seed`; a node only leaves its community for a strictly
/// better one, and among equally good targets the lowest community id wins.
/// Isolated nodes stay singletons.
///
/// If `level_modularity` is given it receives the modularity of the
/// flattened partition after each level (non-decreasing).
Partition louvain(const Graph &g, std::uint64_t seed, double resolution = 1.0,
                  std::vector<double> *level_modularity = nullptr);

/// Q = sum_c [ e_c / |E| - resolution * (d_c / 2|E|)^2 ]; 0 for an edgeless graph.
double modularity(const Graph &g, const Partition &part, double resolution = 1.0);

} // namespace rwl::community

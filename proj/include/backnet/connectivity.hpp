#pragma once

#include <cstdint>

#include "backnet/core_model.hpp"

namespace backnet {

using Adjacency = SquareMatrix<std::uint8_t>;

// Undirected support graph of a plan: an edge wherever X or Y is set.
Adjacency support_graph(const Plan& plan);

// Maximum number of pairwise edge-disjoint s-t paths (unit-capacity max-flow).
int edge_disjoint_paths(const Adjacency& graph, StationId s, StationId t);

// min over all s != t of edge_disjoint_paths. Evaluated as min_t flow(0, t):
// a global minimum cut always separates station 0 from some other station.
int edge_connectivity(const Adjacency& graph);

int path_diversity(const Plan& plan, StationId i, StationId j);
int min_path_diversity(const Plan& plan);

}  // namespace backnet

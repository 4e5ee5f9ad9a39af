#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "backnet/core_model.hpp"

namespace backnet {

// Per-station candidate partners, sorted ascending and mutual
// (j in sets[i] <=> i in sets[j]).
struct NeighborSets {
    std::vector<std::vector<StationId>> sets;

    bool contains(StationId i, StationId j) const;
};

// N_i = { j != i : of_cost(i, j) <= most expensive OF-planning link at i },
// then closed under symmetry by union.
NeighborSets neighbor_sets(const ProblemInstance& problem, const Plan& of_plan,
                           const LinkCosts& costs);

struct CostAssumptionReport {
    bool holds = true;
    std::vector<StationPair> violations;  // i < j
};

// For every non-neighbouring pair: of_cost(i, i*) + of_cost(j, j*) <=
// hybrid_cost(i, j), where i* is the station closest to i in OF cost.
CostAssumptionReport cost_assumption_holds(const ProblemInstance& problem,
                                           const NeighborSets& neighbors, const LinkCosts& costs);

// One link decision per neighbour of a station.
struct Combination {
    StationId station = 0;
    std::vector<StationId> neighbors;
    std::vector<LinkState> decisions;

    LinkState decision_for(StationId j) const;
};

inline constexpr std::size_t kDefaultNeighborCap = 12;

// All {none, OF, hybrid} assignments over N_i that keep every OF-planning link
// of i and meet alpha and D_t at i. Order: base-3 odometer over N_i with the
// first neighbour varying slowest.
std::vector<Combination> enumerate_combinations(const ProblemInstance& problem, StationId i,
                                                const NeighborSets& neighbors,
                                                const Plan& of_plan,
                                                std::size_t neighbor_cap = kDefaultNeighborCap);

struct PlanningVertex {
    StationId station = 0;
    Combination combination;
    double weight = 0.0;  // -1/2 of the combination's link cost
    std::uint64_t of_mask = 0;
    std::uint64_t hybrid_mask = 0;
};

// M-partite compatibility graph. Adjacency is evaluated on demand from the
// link masks; edge_count() is exact.
class PlanningGraph {
public:
    PlanningGraph(std::vector<PlanningVertex> vertices, NeighborSets neighbors);

    std::size_t station_count() const noexcept { return neighbors_.sets.size(); }
    std::size_t vertex_count() const noexcept { return vertices_.size(); }
    const std::vector<PlanningVertex>& vertices() const noexcept { return vertices_; }
    const PlanningVertex& vertex(std::size_t v) const { return vertices_[v]; }
    const NeighborSets& neighbors() const noexcept { return neighbors_; }
    std::uint64_t neighbor_mask(StationId s) const { return neighbor_mask_[s]; }

    // Vertex ids of one station, contiguous.
    std::span<const std::size_t> station_vertices(StationId s) const;

    bool adjacent(std::size_t u, std::size_t v) const;
    std::uint64_t edge_count() const;

private:
    std::vector<PlanningVertex> vertices_;
    NeighborSets neighbors_;
    std::vector<std::uint64_t> neighbor_mask_;
    std::vector<std::size_t> order_;
    std::vector<std::size_t> station_begin_;
};

inline constexpr std::size_t kMaxPlanningStations = 64;

PlanningGraph build_planning_graph(const ProblemInstance& problem,
                                   const std::vector<std::vector<Combination>>& combinations,
                                   const NeighborSets& neighbors, const LinkCosts& costs);

// Exact maximum-weight clique with exactly one vertex per station, by
// branch-and-bound. Returns vertex ids indexed by station. An optional
// incumbent (a valid clique) seeds the bound. Throws NoClique.
std::vector<std::size_t> max_weight_clique(
    const PlanningGraph& graph, const std::optional<std::vector<std::size_t>>& incumbent = {});

// Merges the per-station decisions of a clique; throws InternalConsistency
// if two stations disagree on a shared link.
Plan plan_from_clique(const PlanningGraph& graph, std::span<const std::size_t> clique);

struct HybridOptions {
    std::size_t neighbor_cap = kDefaultNeighborCap;
};

struct HybridPlanningResult {
    Plan plan;
    Plan of_plan;
    double of_plan_cost = 0.0;
    double hybrid_plan_cost = 0.0;
    bool assumption_violated = false;
    std::vector<StationPair> assumption_violations;
    std::size_t graph_vertices = 0;
    std::uint64_t graph_edges = 0;
};

HybridPlanningResult hybrid_planning(const ProblemInstance& problem,
                                     const HybridOptions& options = {});

}  // namespace backnet

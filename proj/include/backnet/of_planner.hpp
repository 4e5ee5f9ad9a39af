#pragma once

#include <optional>
#include <span>
#include <vector>

#include "backnet/core_model.hpp"

namespace backnet {

// Union-find over station ids with path halving and union by size.
class DisjointSet {
public:
    explicit DisjointSet(std::size_t n = 0);

    StationId find(StationId x) const;
    // Returns false when a and b were already in the same block.
    bool unite(StationId a, StationId b);

    std::size_t size() const noexcept { return parent_.size(); }
    std::size_t block_count() const noexcept { return blocks_; }
    std::vector<std::vector<StationId>> blocks() const;

private:
    mutable std::vector<StationId> parent_;
    std::vector<std::size_t> block_size_;
    std::size_t blocks_ = 0;
};

// Working state of one augmentation round: the current clusters and the
// links that may not be reused (modified cost = unavailable).
struct ClusterState {
    DisjointSet partition;
    SquareMatrix<std::uint8_t> forbidden;

    // Singleton clusters; every link already present in prev is forbidden.
    explicit ClusterState(const Plan& prev);
};

struct ClusterLink {
    double cost = 0.0;
    StationId a = 0;
    StationId b = 0;  // a < b
};

// Cheapest allowed link between two distinct clusters, ties broken by the
// lexicographically smallest (a, b). std::nullopt when every cross pair is
// forbidden.
std::optional<ClusterLink> cluster_cost(const ClusterState& state, const LinkCosts& costs,
                                        std::span<const StationId> z,
                                        std::span<const StationId> z_prime);

// One round of forbidden-edge cluster merging on top of an OF-only plan.
// Merging stops early only when every remaining inter-cluster pair is
// already used; the union then already has higher edge connectivity.
// Throws InfeasibleAugmentation when no link can be added (prev complete).
Plan augment_disjoint(const Plan& prev, const LinkCosts& costs);

// Plans after rounds 1..K; element k-1 has min path diversity >= k and each
// element contains the previous one.
std::vector<Plan> of_planning_rounds(const ProblemInstance& problem);

Plan of_planning(const ProblemInstance& problem);

}  // namespace backnet

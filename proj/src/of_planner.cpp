#include "backnet/of_planner.hpp"

#include <algorithm>
#include <numeric>
#include <tuple>

#include <fmt/format.h>

#include "backnet/connectivity.hpp"
#include "backnet/errors.hpp"
#include "backnet/log.hpp"

namespace backnet {

DisjointSet::DisjointSet(std::size_t n) : parent_(n), block_size_(n, 1), blocks_(n) {
    std::iota(parent_.begin(), parent_.end(), StationId{0});
}

StationId DisjointSet::find(StationId x) const {
    while (parent_[x] != x) {
        parent_[x] = parent_[parent_[x]];
        x = parent_[x];
    }
    return x;
}

bool DisjointSet::unite(StationId a, StationId b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    if (block_size_[a] < block_size_[b]) std::swap(a, b);
    parent_[b] = a;
    block_size_[a] += block_size_[b];
    --blocks_;
    return true;
}

std::vector<std::vector<StationId>> DisjointSet::blocks() const {
    std::vector<std::vector<StationId>> by_root(size());
    for (StationId i = 0; i < size(); ++i) by_root[find(i)].push_back(i);
    std::vector<std::vector<StationId>> out;
    for (auto& block : by_root) {
        if (!block.empty()) out.push_back(std::move(block));
    }
    std::sort(out.begin(), out.end());
    return out;
}

ClusterState::ClusterState(const Plan& prev)
    : partition(prev.size()), forbidden(prev.size(), 0) {
    for (StationId i = 0; i < prev.size(); ++i) {
        for (StationId j = 0; j < prev.size(); ++j) {
            if (prev.linked(i, j)) forbidden(i, j) = 1;
        }
    }
}

std::optional<ClusterLink> cluster_cost(const ClusterState& state, const LinkCosts& costs,
                                        std::span<const StationId> z,
                                        std::span<const StationId> z_prime) {
    if (z.empty() || z_prime.empty()) {
        throw InvalidInput("cluster_cost needs two non-empty clusters");
    }
    const StationId root = state.partition.find(z.front());
    const StationId root_prime = state.partition.find(z_prime.front());
    if (root == root_prime) {
        throw InvalidInput("cluster_cost needs two distinct clusters");
    }
    const auto in_block = [&](std::span<const StationId> block, StationId r) {
        return std::all_of(block.begin(), block.end(),
                           [&](StationId s) { return state.partition.find(s) == r; });
    };
    if (!in_block(z, root) || !in_block(z_prime, root_prime)) {
        throw InvalidInput("cluster_cost arguments are not blocks of the partition");
    }

    std::optional<ClusterLink> best;
    for (StationId b : z) {
        for (StationId b_prime : z_prime) {
            if (state.forbidden(b, b_prime)) continue;
            const ClusterLink candidate{costs.of(b, b_prime), std::min(b, b_prime),
                                        std::max(b, b_prime)};
            if (!best || std::tie(candidate.cost, candidate.a, candidate.b) <
                             std::tie(best->cost, best->a, best->b)) {
                best = candidate;
            }
        }
    }
    return best;
}

namespace {

void require_of_only(const Plan& plan) {
    for (StationId i = 0; i < plan.size(); ++i) {
        if (plan.of(i, i) || plan.hybrid(i, i)) {
            throw InvalidInput(fmt::format("plan has a self-link on station {}", i));
        }
        for (StationId j = 0; j < plan.size(); ++j) {
            if (plan.hybrid(i, j)) {
                throw InvalidInput("augmentation expects an OF-only plan");
            }
            if (plan.of(i, j) != plan.of(j, i)) {
                throw InvalidInput("augmentation expects a symmetric plan");
            }
        }
    }
}

}  // namespace

Plan augment_disjoint(const Plan& prev, const LinkCosts& costs) {
    require_of_only(prev);
    const std::size_t m = prev.size();
    if (costs.of.size() != m) {
        throw InvalidInput("cost matrix does not match the plan size");
    }

    ClusterState state(prev);

    // Repeatedly joining the two clusters with the cheapest allowed cross link
    // is the same as scanning allowed links in (cost, a, b) order and keeping
    // those that join different clusters.
    std::vector<ClusterLink> allowed;
    for (StationId a = 0; a < m; ++a) {
        for (StationId b = a + 1; b < m; ++b) {
            if (!state.forbidden(a, b)) allowed.push_back({costs.of(a, b), a, b});
        }
    }
    std::sort(allowed.begin(), allowed.end(), [](const ClusterLink& l, const ClusterLink& r) {
        return std::tie(l.cost, l.a, l.b) < std::tie(r.cost, r.a, r.b);
    });

    Plan next = prev;
    std::size_t added = 0;
    for (const auto& link : allowed) {
        if (state.partition.block_count() <= 1) break;
        if (state.partition.unite(link.a, link.b)) {
            next.set(link.a, link.b, LinkState::of);
            ++added;
        }
    }

    if (added == 0) {
        throw InfeasibleAugmentation(
            "every station pair is already linked; no unused link remains");
    }
    if (state.partition.block_count() > 1) {
        log::debug("augmentation stopped with {} clusters left after {} new links",
                   state.partition.block_count(), added);
    }
    const int before = min_path_diversity(prev);
    const int after = min_path_diversity(next);
    if (after < before + 1) {
        throw InternalConsistency(fmt::format(
            "augmentation produced path diversity {} from {}", after, before));
    }
    return next;
}

std::vector<Plan> of_planning_rounds(const ProblemInstance& problem) {
    problem.validate();
    const std::size_t m = problem.size();
    if (static_cast<std::size_t>(problem.k) >= m) {
        throw Infeasible(fmt::format("infeasible: K must be < M (K={}, M={})", problem.k, m));
    }
    const LinkCosts costs = link_costs(problem.topology, problem.models);

    std::vector<Plan> rounds;
    rounds.reserve(static_cast<std::size_t>(problem.k));
    Plan current(m);
    for (int level = 1; level <= problem.k; ++level) {
        // A round can overshoot; later rounds then have nothing to add.
        if (min_path_diversity(current) < level) {
            current = augment_disjoint(current, costs);
        }
        rounds.push_back(current);
    }
    return rounds;
}

Plan of_planning(const ProblemInstance& problem) { return of_planning_rounds(problem).back(); }

}  // namespace backnet

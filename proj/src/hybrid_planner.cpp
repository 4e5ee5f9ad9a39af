#include "backnet/hybrid_planner.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include <fmt/format.h>

#include "backnet/errors.hpp"
#include "backnet/log.hpp"
#include "backnet/of_planner.hpp"

namespace backnet {

bool NeighborSets::contains(StationId i, StationId j) const {
    const auto& s = sets.at(i);
    return std::binary_search(s.begin(), s.end(), j);
}

NeighborSets neighbor_sets(const ProblemInstance& problem, const Plan& of_plan,
                           const LinkCosts& costs) {
    const std::size_t m = problem.size();
    if (of_plan.size() != m) {
        throw InvalidInput("OF plan does not match the instance size");
    }
    SquareMatrix<std::uint8_t> member(m, 0);
    for (StationId i = 0; i < m; ++i) {
        double reach = 0.0;
        for (StationId k = 0; k < m; ++k) {
            if (k != i && of_plan.of(i, k)) reach = std::max(reach, costs.of(i, k));
        }
        for (StationId j = 0; j < m; ++j) {
            if (j != i && costs.of(i, j) <= reach) {
                member(i, j) = member(j, i) = 1;
            }
        }
    }
    NeighborSets out;
    out.sets.resize(m);
    for (StationId i = 0; i < m; ++i) {
        for (StationId j = 0; j < m; ++j) {
            if (member(i, j)) out.sets[i].push_back(j);
        }
    }
    return out;
}

CostAssumptionReport cost_assumption_holds(const ProblemInstance& problem,
                                           const NeighborSets& neighbors, const LinkCosts& costs) {
    const std::size_t m = problem.size();
    std::vector<double> closest(m, 0.0);
    for (StationId i = 0; i < m; ++i) {
        double best = INFINITY;
        for (StationId j = 0; j < m; ++j) {
            if (j != i) best = std::min(best, costs.of(i, j));
        }
        closest[i] = std::isfinite(best) ? best : 0.0;
    }
    CostAssumptionReport report;
    for (StationId i = 0; i < m; ++i) {
        for (StationId j = i + 1; j < m; ++j) {
            if (neighbors.contains(i, j) && neighbors.contains(j, i)) continue;
            if (closest[i] + closest[j] > costs.hybrid(i, j)) {
                report.violations.emplace_back(i, j);
            }
        }
    }
    report.holds = report.violations.empty();
    return report;
}

LinkState Combination::decision_for(StationId j) const {
    const auto it = std::lower_bound(neighbors.begin(), neighbors.end(), j);
    if (it == neighbors.end() || *it != j) return LinkState::none;
    return decisions[static_cast<std::size_t>(it - neighbors.begin())];
}

std::vector<Combination> enumerate_combinations(const ProblemInstance& problem, StationId i,
                                                const NeighborSets& neighbors,
                                                const Plan& of_plan, std::size_t neighbor_cap) {
    const auto& nbrs = neighbors.sets.at(i);
    const std::size_t n = nbrs.size();
    if (n > neighbor_cap) {
        throw CombinatorialLimit(fmt::format(
            "station {} has {} neighbours; the combination cap is {}", i, n, neighbor_cap));
    }

    std::vector<double> reliability(n);
    std::vector<double> rate(n);
    std::vector<bool> forced(n);
    for (std::size_t p = 0; p < n; ++p) {
        const double d = problem.topology.distance(i, nbrs[p]);
        reliability[p] = hybrid_reliability(d, problem.models, problem.alpha);
        rate[p] = hybrid_rate(d, problem.models, problem.target_rate);
        forced[p] = of_plan.of(i, nbrs[p]);
    }

    std::size_t total = 1;
    for (std::size_t p = 0; p < n; ++p) total *= 3;

    std::vector<Combination> out;
    std::vector<LinkState> decisions(n, LinkState::none);
    for (std::size_t code = 0; code < total; ++code) {
        std::size_t rest = code;
        bool keep = true;
        for (std::size_t p = n; p-- > 0;) {
            decisions[p] = static_cast<LinkState>(rest % 3);
            rest /= 3;
            if (forced[p] && decisions[p] == LinkState::none) {
                keep = false;
                break;
            }
        }
        if (!keep) continue;

        double all_fail = 1.0;
        double offered = 0.0;
        for (std::size_t p = 0; p < n; ++p) {
            if (decisions[p] == LinkState::of) {
                all_fail = 0.0;
                offered += problem.target_rate;
            } else if (decisions[p] == LinkState::hybrid) {
                all_fail *= 1.0 - reliability[p];
                offered += rate[p];
            }
        }
        if (!meets_threshold(1.0 - all_fail, problem.alpha) ||
            !meets_threshold(offered, problem.target_rate)) {
            continue;
        }
        out.push_back({i, nbrs, decisions});
    }
    return out;
}

PlanningGraph::PlanningGraph(std::vector<PlanningVertex> vertices, NeighborSets neighbors)
    : vertices_(std::move(vertices)), neighbors_(std::move(neighbors)) {
    const std::size_t m = neighbors_.sets.size();
    if (m > kMaxPlanningStations) {
        throw InvalidInput(fmt::format("planning graphs support at most {} stations, got {}",
                                       kMaxPlanningStations, m));
    }
    neighbor_mask_.assign(m, 0);
    for (StationId s = 0; s < m; ++s) {
        for (StationId j : neighbors_.sets[s]) {
            if (j >= m || j == s || !neighbors_.contains(j, s)) {
                throw InvalidInput("planning graph needs mutual neighbour sets");
            }
            neighbor_mask_[s] |= std::uint64_t{1} << j;
        }
    }
    std::stable_sort(vertices_.begin(), vertices_.end(),
                     [](const PlanningVertex& a, const PlanningVertex& b) {
                         return a.station < b.station;
                     });
    order_.resize(vertices_.size());
    station_begin_.assign(m + 1, 0);
    for (std::size_t v = 0; v < vertices_.size(); ++v) {
        order_[v] = v;
        if (vertices_[v].station >= m) {
            throw InvalidInput("planning vertex references an unknown station");
        }
        ++station_begin_[vertices_[v].station + 1];
    }
    for (StationId s = 0; s < m; ++s) station_begin_[s + 1] += station_begin_[s];
}

std::span<const std::size_t> PlanningGraph::station_vertices(StationId s) const {
    return std::span<const std::size_t>(order_).subspan(station_begin_[s],
                                                        station_begin_[s + 1] - station_begin_[s]);
}

namespace {

int mask_state(const PlanningVertex& v, StationId j) {
    const std::uint64_t bit = std::uint64_t{1} << j;
    if (v.of_mask & bit) return 1;
    if (v.hybrid_mask & bit) return 2;
    return 0;
}

}  // namespace

bool PlanningGraph::adjacent(std::size_t u, std::size_t v) const {
    const auto& a = vertices_[u];
    const auto& b = vertices_[v];
    if (a.station == b.station) return false;
    if (!(neighbor_mask_[a.station] & (std::uint64_t{1} << b.station))) return true;
    return mask_state(a, b.station) == mask_state(b, a.station);
}

std::uint64_t PlanningGraph::edge_count() const {
    const std::size_t m = station_count();
    std::uint64_t edges = 0;
    for (StationId s = 0; s < m; ++s) {
        for (StationId t = s + 1; t < m; ++t) {
            const auto vs = station_vertices(s);
            const auto vt = station_vertices(t);
            if (!(neighbor_mask_[s] & (std::uint64_t{1} << t))) {
                edges += static_cast<std::uint64_t>(vs.size()) * vt.size();
                continue;
            }
            std::array<std::uint64_t, 3> count_s{};
            std::array<std::uint64_t, 3> count_t{};
            for (std::size_t v : vs) ++count_s[mask_state(vertices_[v], t)];
            for (std::size_t v : vt) ++count_t[mask_state(vertices_[v], s)];
            for (int k = 0; k < 3; ++k) edges += count_s[k] * count_t[k];
        }
    }
    return edges;
}

PlanningGraph build_planning_graph(const ProblemInstance& problem,
                                   const std::vector<std::vector<Combination>>& combinations,
                                   const NeighborSets& neighbors, const LinkCosts& costs) {
    const std::size_t m = problem.size();
    if (combinations.size() != m || neighbors.sets.size() != m) {
        throw InvalidInput("one combination list and one neighbour set per station are required");
    }
    std::vector<PlanningVertex> vertices;
    for (StationId s = 0; s < m; ++s) {
        if (combinations[s].empty()) {
            throw NoClique(fmt::format("station {} has no admissible link combination", s));
        }
        for (const auto& combo : combinations[s]) {
            if (combo.station != s) {
                throw InvalidInput("combination listed under the wrong station");
            }
            PlanningVertex v;
            v.station = s;
            v.combination = combo;
            double cost = 0.0;
            for (std::size_t p = 0; p < combo.neighbors.size(); ++p) {
                const StationId j = combo.neighbors[p];
                const std::uint64_t bit = std::uint64_t{1} << j;
                if (combo.decisions[p] == LinkState::of) {
                    cost += costs.of(s, j);
                    v.of_mask |= bit;
                } else if (combo.decisions[p] == LinkState::hybrid) {
                    cost += costs.hybrid(s, j);
                    v.hybrid_mask |= bit;
                }
            }
            v.weight = -0.5 * cost;
            vertices.push_back(std::move(v));
        }
    }
    return PlanningGraph(std::move(vertices), neighbors);
}

Plan plan_from_clique(const PlanningGraph& graph, std::span<const std::size_t> clique) {
    const std::size_t m = graph.station_count();
    if (clique.size() != m) {
        throw InvalidInput("clique must select exactly one vertex per station");
    }
    Plan plan(m);
    SquareMatrix<std::uint8_t> decided(m, 0);
    for (StationId s = 0; s < m; ++s) {
        const auto& vertex = graph.vertex(clique[s]);
        if (vertex.station != s) {
            throw InvalidInput(fmt::format("clique entry {} belongs to station {}", s,
                                           vertex.station));
        }
        const auto& combo = vertex.combination;
        for (std::size_t p = 0; p < combo.neighbors.size(); ++p) {
            const StationId j = combo.neighbors[p];
            const LinkState want = combo.decisions[p];
            if (decided(s, j) && plan.state(s, j) != want) {
                throw InternalConsistency(
                    fmt::format("stations {} and {} disagree on their shared link", s, j));
            }
            plan.set(s, j, want);
            decided(s, j) = decided(j, s) = 1;
        }
    }
    return plan;
}

HybridPlanningResult hybrid_planning(const ProblemInstance& problem, const HybridOptions& options) {
    problem.validate();
    const std::size_t m = problem.size();
    if (m > kMaxPlanningStations) {
        throw InvalidInput(fmt::format("hybrid planning supports at most {} stations",
                                       kMaxPlanningStations));
    }
    const LinkCosts costs = link_costs(problem.topology, problem.models);

    HybridPlanningResult result;
    result.of_plan = of_planning(problem);
    result.of_plan_cost = plan_cost(result.of_plan, costs);

    const NeighborSets neighbors = neighbor_sets(problem, result.of_plan, costs);
    const auto assumption = cost_assumption_holds(problem, neighbors, costs);
    result.assumption_violated = !assumption.holds;
    result.assumption_violations = assumption.violations;
    if (!assumption.holds) {
        log::info("cost assumption fails on {} station pairs; optimality over the full "
                  "problem is not guaranteed",
                  assumption.violations.size());
    }

    std::vector<std::vector<Combination>> combinations(m);
    for (StationId s = 0; s < m; ++s) {
        combinations[s] =
            enumerate_combinations(problem, s, neighbors, result.of_plan, options.neighbor_cap);
    }
    const PlanningGraph graph = build_planning_graph(problem, combinations, neighbors, costs);
    result.graph_vertices = graph.vertex_count();
    result.graph_edges = graph.edge_count();
    log::debug("planning graph: {} vertices, {} edges", result.graph_vertices, result.graph_edges);

    // The OF planning itself is a clique: seed the search with it.
    std::optional<std::vector<std::size_t>> seed{std::vector<std::size_t>(m)};
    for (StationId s = 0; s < m && seed; ++s) {
        bool found = false;
        for (std::size_t v : graph.station_vertices(s)) {
            const auto& combo = graph.vertex(v).combination;
            bool matches = true;
            for (std::size_t p = 0; p < combo.neighbors.size() && matches; ++p) {
                const LinkState expected =
                    result.of_plan.of(s, combo.neighbors[p]) ? LinkState::of : LinkState::none;
                matches = combo.decisions[p] == expected;
            }
            if (matches) {
                (*seed)[s] = v;
                found = true;
                break;
            }
        }
        if (!found) seed.reset();
    }

    const auto clique = max_weight_clique(graph, seed);
    result.plan = plan_from_clique(graph, clique);
    result.hybrid_plan_cost = plan_cost(result.plan, costs);

    const auto report = check_feasibility(result.plan, problem);
    if (!report.overall) {
        throw InternalConsistency("hybrid planning produced a plan that fails the constraints");
    }
    return result;
}

}  // namespace backnet

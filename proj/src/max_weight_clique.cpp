#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <utility>
#include <vector>

#include <fmt/format.h>

#include "backnet/errors.hpp"
#include "backnet/hybrid_planner.hpp"

namespace backnet {

namespace {

// A new clique must beat the incumbent by more than this to replace it.
constexpr double kImprovement = 1e-7;
constexpr std::size_t kUnassigned = std::numeric_limits<std::size_t>::max();

int link_state(const PlanningVertex& v, StationId j) {
    const std::uint64_t bit = std::uint64_t{1} << j;
    if (v.of_mask & bit) return 1;
    if (v.hybrid_mask & bit) return 2;
    return 0;
}

// Depth-first branch-and-bound over stations. Each unassigned station keeps a
// domain of vertices still compatible with every assigned neighbour, sorted
// by decreasing weight, so the bound is the sum of domain heads. The next
// station to branch on is the one with the smallest domain.
class CliqueSearch {
public:
    explicit CliqueSearch(const PlanningGraph& graph)
        : graph_(graph), m_(graph.station_count()), domain_(m_), assigned_(m_, kUnassigned) {
        for (StationId s = 0; s < m_; ++s) {
            const auto ids = graph.station_vertices(s);
            domain_[s].assign(ids.begin(), ids.end());
            std::stable_sort(domain_[s].begin(), domain_[s].end(),
                             [&](std::size_t a, std::size_t b) {
                                 return graph.vertex(a).weight > graph.vertex(b).weight;
                             });
        }
    }

    void seed(const std::vector<std::size_t>& clique) {
        if (clique.size() != m_) {
            throw InvalidInput("incumbent clique must hold one vertex per station");
        }
        double weight = 0.0;
        for (StationId s = 0; s < m_; ++s) {
            if (clique[s] >= graph_.vertex_count() || graph_.vertex(clique[s]).station != s) {
                throw InvalidInput(fmt::format("incumbent entry {} is not a vertex of station {}",
                                               clique[s], s));
            }
            for (StationId t = 0; t < s; ++t) {
                if (!graph_.adjacent(clique[s], clique[t])) {
                    throw InvalidInput("incumbent is not a clique");
                }
            }
            weight += graph_.vertex(clique[s]).weight;
        }
        best_ = clique;
        best_weight_ = weight;
        found_ = true;
    }

    void run() { search(m_); }

    bool found() const noexcept { return found_; }
    const std::vector<std::size_t>& best() const noexcept { return best_; }

private:
    double weight(std::size_t v) const { return graph_.vertex(v).weight; }

    void search(std::size_t remaining) {
        if (remaining == 0) {
            if (!found_ || current_ > best_weight_ + kImprovement) {
                best_ = assigned_;
                best_weight_ = current_;
                found_ = true;
            }
            return;
        }

        double bound = current_;
        StationId branch = kUnassigned;
        for (StationId s = 0; s < m_; ++s) {
            if (assigned_[s] != kUnassigned) continue;
            if (domain_[s].empty()) return;
            bound += weight(domain_[s].front());
            if (branch == kUnassigned || domain_[s].size() < domain_[branch].size()) branch = s;
        }
        if (found_ && bound <= best_weight_ + kImprovement) return;

        const double others = bound - current_ - weight(domain_[branch].front());
        const std::uint64_t neighbours = graph_.neighbor_mask(branch);
        std::vector<std::pair<StationId, std::vector<std::size_t>>> saved;

        for (std::size_t v : domain_[branch]) {
            if (found_ && current_ + weight(v) + others <= best_weight_ + kImprovement) break;

            bool wiped_out = false;
            saved.clear();
            for (StationId k = 0; k < m_ && !wiped_out; ++k) {
                if (assigned_[k] != kUnassigned || k == branch) continue;
                if (!(neighbours & (std::uint64_t{1} << k))) continue;
                const int agreed = link_state(graph_.vertex(v), k);
                std::vector<std::size_t> filtered;
                filtered.reserve(domain_[k].size());
                for (std::size_t u : domain_[k]) {
                    if (link_state(graph_.vertex(u), branch) == agreed) filtered.push_back(u);
                }
                wiped_out = filtered.empty();
                saved.emplace_back(k, std::move(domain_[k]));
                domain_[k] = std::move(filtered);
            }

            if (!wiped_out) {
                assigned_[branch] = v;
                current_ += weight(v);
                search(remaining - 1);
                current_ -= weight(v);
                assigned_[branch] = kUnassigned;
            }
            for (auto& [k, domain] : saved) domain_[k] = std::move(domain);
        }
    }

    const PlanningGraph& graph_;
    std::size_t m_;
    std::vector<std::vector<std::size_t>> domain_;
    std::vector<std::size_t> assigned_;
    double current_ = 0.0;
    std::vector<std::size_t> best_;
    double best_weight_ = -std::numeric_limits<double>::infinity();
    bool found_ = false;
};

}  // namespace

std::vector<std::size_t> max_weight_clique(const PlanningGraph& graph,
                                           const std::optional<std::vector<std::size_t>>& incumbent) {
    CliqueSearch search(graph);
    if (incumbent) search.seed(*incumbent);
    search.run();
    if (!search.found()) {
        throw NoClique("no selection of one combination per station is mutually compatible");
    }
    return search.best();
}

}  // namespace backnet

#include "backnet/oracle.hpp"

#include <vector>

#include <fmt/format.h>

#include "backnet/connectivity.hpp"
#include "backnet/errors.hpp"

namespace backnet {

namespace {

void check_preconditions(const ProblemInstance& problem, std::size_t cap) {
    problem.validate();
    const std::size_t m = problem.size();
    if (m > cap) {
        throw CapExceeded(
            fmt::format("exhaustive search is capped at M = {}; instance has M = {}", cap, m));
    }
    if (static_cast<std::size_t>(problem.k) >= m) {
        throw Infeasible(fmt::format("infeasible: K must be < M (K={}, M={})", problem.k, m));
    }
}

// Depth-first enumeration shared by both oracles. A station's reliability,
// rate and degree are final once its last pair is assigned, so those checks
// prune early; connectivity is checked on complete assignments.
class Enumerator {
public:
    // The OF-only search solves the reduced problem: connectivity alone, with
    // no per-station reliability or rate constraint.
    Enumerator(const ProblemInstance& problem, bool allow_hybrid)
        : problem_(problem),
          node_constraints_(allow_hybrid),
          costs_(link_costs(problem.topology, problem.models)),
          m_(problem.size()),
          last_pair_(m_, 0),
          states_(allow_hybrid ? 3 : 2),
          degree_(m_, 0),
          all_fail_(m_, 1.0),
          rate_(m_, 0.0),
          graph_(m_, 0) {
        for (StationId i = 0; i < m_; ++i) {
            for (StationId j = i + 1; j < m_; ++j) {
                last_pair_[i] = last_pair_[j] = pairs_.size();
                pairs_.emplace_back(i, j);
                const double d = problem.topology.distance(i, j);
                reliability_.push_back(hybrid_reliability(d, problem.models, problem.alpha));
                rate_offer_.push_back(hybrid_rate(d, problem.models, problem.target_rate));
            }
        }
        assignment_.assign(pairs_.size(), LinkState::none);
    }

    OracleResult run() {
        descend(0, 0.0);
        if (!result_.feasible_found) {
            throw Infeasible("no link assignment satisfies the constraints");
        }
        return result_;
    }

private:
    bool station_complete_ok(StationId s) const {
        if (degree_[s] < problem_.k) return false;
        return !node_constraints_ || (meets_threshold(1.0 - all_fail_[s], problem_.alpha) &&
                                      meets_threshold(rate_[s], problem_.target_rate));
    }

    void descend(std::size_t p, double cost) {
        if (result_.feasible_found && cost >= result_.cost) return;
        if (p == pairs_.size()) {
            ++result_.explored;
            if (edge_connectivity(graph_) < problem_.k) return;
            Plan plan(m_);
            for (std::size_t q = 0; q < pairs_.size(); ++q) {
                plan.set(pairs_[q].first, pairs_[q].second, assignment_[q]);
            }
            result_.plan = std::move(plan);
            result_.cost = cost;
            result_.feasible_found = true;
            return;
        }

        const auto [i, j] = pairs_[p];
        for (int s = 0; s < states_; ++s) {
            const auto state = static_cast<LinkState>(s);
            const double saved_fail_i = all_fail_[i];
            const double saved_fail_j = all_fail_[j];
            const double saved_rate_i = rate_[i];
            const double saved_rate_j = rate_[j];
            double link_cost = 0.0;
            if (state == LinkState::of) {
                link_cost = costs_.of(i, j);
                all_fail_[i] = all_fail_[j] = 0.0;
                rate_[i] += problem_.target_rate;
                rate_[j] += problem_.target_rate;
            } else if (state == LinkState::hybrid) {
                link_cost = costs_.hybrid(i, j);
                all_fail_[i] *= 1.0 - reliability_[p];
                all_fail_[j] *= 1.0 - reliability_[p];
                rate_[i] += rate_offer_[p];
                rate_[j] += rate_offer_[p];
            }
            const int linked = state == LinkState::none ? 0 : 1;
            degree_[i] += linked;
            degree_[j] += linked;
            graph_(i, j) = graph_(j, i) = static_cast<std::uint8_t>(linked);
            assignment_[p] = state;

            const bool ok = (last_pair_[i] != p || station_complete_ok(i)) &&
                            (last_pair_[j] != p || station_complete_ok(j));
            if (ok) descend(p + 1, cost + link_cost);

            degree_[i] -= linked;
            degree_[j] -= linked;
            all_fail_[i] = saved_fail_i;
            all_fail_[j] = saved_fail_j;
            rate_[i] = saved_rate_i;
            rate_[j] = saved_rate_j;
        }
        graph_(i, j) = graph_(j, i) = 0;
        assignment_[p] = LinkState::none;
    }

    const ProblemInstance& problem_;
    bool node_constraints_;
    LinkCosts costs_;
    std::size_t m_;
    std::vector<StationPair> pairs_;
    std::vector<std::size_t> last_pair_;
    std::vector<double> reliability_;
    std::vector<double> rate_offer_;
    int states_;
    std::vector<int> degree_;
    std::vector<double> all_fail_;
    std::vector<double> rate_;
    SquareMatrix<std::uint8_t> graph_;
    std::vector<LinkState> assignment_;
    OracleResult result_;
};

}  // namespace

OracleResult brute_force_original(const ProblemInstance& problem, std::size_t cap) {
    check_preconditions(problem, cap);
    return Enumerator(problem, true).run();
}

OracleResult brute_force_of(const ProblemInstance& problem, std::size_t cap) {
    check_preconditions(problem, cap);
    return Enumerator(problem, false).run();
}

bool redundancy_check(const ProblemInstance& problem, std::size_t cap) {
    check_preconditions(problem, cap);
    const std::size_t m = problem.size();
    std::vector<StationPair> pairs;
    for (StationId i = 0; i < m; ++i) {
        for (StationId j = i + 1; j < m; ++j) pairs.emplace_back(i, j);
    }
    const std::uint64_t subsets = std::uint64_t{1} << pairs.size();
    for (std::uint64_t code = 0; code < subsets; ++code) {
        Plan plan(m);
        for (std::size_t q = 0; q < pairs.size(); ++q) {
            if (code >> q & 1U) plan.set(pairs[q].first, pairs[q].second, LinkState::of);
        }
        if (min_path_diversity(plan) < problem.k) continue;
        for (StationId s = 0; s < m; ++s) {
            if (!meets_threshold(node_reliability(plan, problem, s), problem.alpha) ||
                !meets_threshold(node_rate(plan, problem, s), problem.target_rate)) {
                return false;
            }
        }
    }
    return true;
}

}  // namespace backnet

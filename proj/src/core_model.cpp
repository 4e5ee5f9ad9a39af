#include "backnet/core_model.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <fmt/format.h>

#include "backnet/connectivity.hpp"
#include "backnet/errors.hpp"

namespace backnet {

Topology::Topology(std::vector<BaseStation> stations) : stations_(std::move(stations)) {
    std::sort(stations_.begin(), stations_.end(),
              [](const BaseStation& a, const BaseStation& b) { return a.id < b.id; });
    for (std::size_t i = 0; i < stations_.size(); ++i) {
        const auto& s = stations_[i];
        if (s.id != i) {
            throw InvalidInput(fmt::format("station ids must be unique and contiguous from 0; "
                                           "expected id {} but found {}",
                                           i, s.id));
        }
        if (!std::isfinite(s.position.x_m) || !std::isfinite(s.position.y_m)) {
            throw InvalidInput(fmt::format("station {} has non-finite coordinates", s.id));
        }
    }
    const std::size_t m = stations_.size();
    distance_ = SquareMatrix<double>(m, 0.0);
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = i + 1; j < m; ++j) {
            const double d = std::hypot(stations_[i].position.x_m - stations_[j].position.x_m,
                                        stations_[i].position.y_m - stations_[j].position.y_m);
            distance_(i, j) = d;
            distance_(j, i) = d;
        }
    }
}

Topology Topology::from_positions(const std::vector<Position>& positions) {
    std::vector<BaseStation> stations;
    stations.reserve(positions.size());
    for (std::size_t i = 0; i < positions.size(); ++i) {
        stations.push_back({i, positions[i]});
    }
    return Topology(std::move(stations));
}

void LinkModels::validate() const {
    const auto positive = [](double v) { return std::isfinite(v) && v > 0.0; };
    if (!positive(of_cost_per_meter) || !positive(hybrid_cost_flat) ||
        !positive(reliability_threshold_m) || !positive(rate_threshold_m) ||
        !positive(reliability_decay_m) || !positive(rate_decay_m)) {
        throw InvalidInput("link model parameters must all be finite and strictly positive");
    }
}

void ProblemInstance::validate() const {
    if (topology.size() == 0) {
        throw InvalidInput("instance has no stations");
    }
    if (k < 1) {
        throw InvalidInput(fmt::format("K must be >= 1, got {}", k));
    }
    if (!(alpha >= 0.0 && alpha <= 1.0)) {
        throw InvalidInput(fmt::format("alpha must lie in [0, 1], got {}", alpha));
    }
    if (!(std::isfinite(target_rate) && target_rate > 0.0)) {
        throw InvalidInput(fmt::format("D_t must be > 0, got {}", target_rate));
    }
    models.validate();
}

Plan Plan::from_matrices(SquareMatrix<std::uint8_t> x, SquareMatrix<std::uint8_t> y) {
    if (x.size() != y.size()) {
        throw InvalidInput("X and Y matrices differ in size");
    }
    Plan plan;
    plan.x_ = std::move(x);
    plan.y_ = std::move(y);
    return plan;
}

LinkState Plan::state(StationId i, StationId j) const {
    if (of(i, j)) return LinkState::of;
    if (hybrid(i, j)) return LinkState::hybrid;
    return LinkState::none;
}

void Plan::set(StationId i, StationId j, LinkState state) {
    if (i == j) {
        throw InvalidInput(fmt::format("self-link on station {} is not allowed", i));
    }
    if (i >= size() || j >= size()) {
        throw InvalidInput(fmt::format("link ({}, {}) outside a plan of size {}", i, j, size()));
    }
    const std::uint8_t is_of = state == LinkState::of ? 1 : 0;
    const std::uint8_t is_hybrid = state == LinkState::hybrid ? 1 : 0;
    x_(i, j) = x_(j, i) = is_of;
    y_(i, j) = y_(j, i) = is_hybrid;
}

namespace {

std::vector<StationPair> upper_links(const SquareMatrix<std::uint8_t>& m) {
    std::vector<StationPair> out;
    for (std::size_t i = 0; i < m.size(); ++i) {
        for (std::size_t j = i + 1; j < m.size(); ++j) {
            if (m(i, j)) out.emplace_back(i, j);
        }
    }
    return out;
}

}  // namespace

std::vector<StationPair> Plan::of_links() const { return upper_links(x_); }
std::vector<StationPair> Plan::hybrid_links() const { return upper_links(y_); }

std::size_t Plan::link_count() const {
    std::size_t n = 0;
    for (std::size_t i = 0; i < size(); ++i) {
        for (std::size_t j = i + 1; j < size(); ++j) {
            if (linked(i, j)) ++n;
        }
    }
    return n;
}

double hybrid_reliability(double distance_m, const LinkModels& models, double alpha) {
    const double plateau = models.plateau == ReliabilityPlateau::alpha ? alpha : 1.0;
    if (distance_m <= models.reliability_threshold_m) {
        return plateau;
    }
    return plateau *
           std::exp(-(distance_m - models.reliability_threshold_m) / models.reliability_decay_m);
}

double hybrid_rate(double distance_m, const LinkModels& models, double target_rate) {
    if (distance_m <= models.rate_threshold_m) {
        return target_rate;
    }
    return target_rate * std::exp(-(distance_m - models.rate_threshold_m) / models.rate_decay_m);
}

LinkCosts link_costs(const Topology& topology, const LinkModels& models) {
    const std::size_t m = topology.size();
    LinkCosts costs{SquareMatrix<double>(m, 0.0), SquareMatrix<double>(m, 0.0)};
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < m; ++j) {
            if (i == j) continue;
            costs.of(i, j) = models.of_cost_per_meter * topology.distance(i, j);
            costs.hybrid(i, j) = models.hybrid_cost_flat;
        }
    }
    return costs;
}

double node_reliability(const Plan& plan, const ProblemInstance& problem, StationId i) {
    double all_fail = 1.0;
    for (StationId j = 0; j < plan.size(); ++j) {
        if (j == i) continue;
        const double x = plan.of(i, j) ? 1.0 : 0.0;
        const double y = plan.hybrid(i, j) ? 1.0 : 0.0;
        if (x == 0.0 && y == 0.0) continue;
        const double r = hybrid_reliability(problem.topology.distance(i, j), problem.models,
                                            problem.alpha);
        all_fail *= (1.0 - x) * (1.0 - y * r);
    }
    return 1.0 - all_fail;
}

double node_rate(const Plan& plan, const ProblemInstance& problem, StationId i) {
    double rate = 0.0;
    for (StationId j = 0; j < plan.size(); ++j) {
        if (j == i) continue;
        if (plan.of(i, j)) {
            rate += problem.target_rate;
        }
        if (plan.hybrid(i, j)) {
            rate += hybrid_rate(problem.topology.distance(i, j), problem.models,
                                problem.target_rate);
        }
    }
    return rate;
}

FeasibilityReport check_feasibility(const Plan& plan, const ProblemInstance& problem) {
    const std::size_t m = problem.size();
    if (plan.size() != m) {
        throw InvalidInput(
            fmt::format("plan has {} stations but the instance has {}", plan.size(), m));
    }

    FeasibilityReport report;
    for (StationId i = 0; i < m; ++i) {
        if (plan.linked(i, i)) {
            report.exclusivity_violations.emplace_back(i, i);
        }
        for (StationId j = i + 1; j < m; ++j) {
            const bool asymmetric = plan.of(i, j) != plan.of(j, i) ||
                                    plan.hybrid(i, j) != plan.hybrid(j, i);
            const bool both = (plan.of(i, j) && plan.hybrid(i, j)) ||
                              (plan.of(j, i) && plan.hybrid(j, i));
            if (asymmetric || both) {
                report.exclusivity_violations.emplace_back(i, j);
            }
        }
    }
    report.exclusivity_ok = report.exclusivity_violations.empty();

    report.min_path_diversity = min_path_diversity(plan);
    report.connectivity_ok = report.min_path_diversity >= problem.k;

    report.reliability_ok = true;
    report.rate_ok = true;
    report.node_reliability.reserve(m);
    report.node_rate.reserve(m);
    for (StationId i = 0; i < m; ++i) {
        const double r = node_reliability(plan, problem, i);
        const double d = node_rate(plan, problem, i);
        report.node_reliability.push_back(r);
        report.node_rate.push_back(d);
        report.reliability_ok = report.reliability_ok && meets_threshold(r, problem.alpha);
        report.rate_ok = report.rate_ok && meets_threshold(d, problem.target_rate);
    }

    report.overall = report.exclusivity_ok && report.connectivity_ok && report.reliability_ok &&
                     report.rate_ok;
    return report;
}

double plan_cost(const Plan& plan, const LinkCosts& costs) {
    double total = 0.0;
    for (StationId i = 0; i < plan.size(); ++i) {
        for (StationId j = i + 1; j < plan.size(); ++j) {
            if (plan.of(i, j)) total += costs.of(i, j);
            if (plan.hybrid(i, j)) total += costs.hybrid(i, j);
        }
    }
    return total;
}

}  // namespace backnet

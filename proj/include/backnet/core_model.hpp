#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

#include "backnet/matrix.hpp"

namespace backnet {

using StationId = std::size_t;
using StationPair = std::pair<StationId, StationId>;

struct Position {
    double x_m = 0.0;
    double y_m = 0.0;
};

struct BaseStation {
    StationId id = 0;
    Position position;
};

// Station set with the derived Euclidean distance matrix. Stations are kept
// sorted by id; ids must be exactly 0..M-1.
class Topology {
public:
    Topology() = default;
    explicit Topology(std::vector<BaseStation> stations);

    static Topology from_positions(const std::vector<Position>& positions);

    std::size_t size() const noexcept { return stations_.size(); }
    const std::vector<BaseStation>& stations() const noexcept { return stations_; }
    double distance(StationId i, StationId j) const { return distance_(i, j); }
    const SquareMatrix<double>& distances() const noexcept { return distance_; }

private:
    std::vector<BaseStation> stations_;
    SquareMatrix<double> distance_;
};

// What a short hybrid link (d <= d_R) is worth in the reliability product.
enum class ReliabilityPlateau { alpha, one };

struct LinkModels {
    double of_cost_per_meter = 13.5;
    double hybrid_cost_flat = 20'000.0;
    double reliability_threshold_m = 2'000.0;
    double rate_threshold_m = 3'000.0;
    double reliability_decay_m = 500.0;
    double rate_decay_m = 500.0;
    ReliabilityPlateau plateau = ReliabilityPlateau::alpha;

    void validate() const;
};

struct ProblemInstance {
    Topology topology;
    int k = 1;
    double alpha = 0.95;
    double target_rate = 1.0;
    LinkModels models;

    std::size_t size() const noexcept { return topology.size(); }

    // Checks field ranges. K < M is deliberately left to the planners so an
    // over-demanding instance reports as infeasible instead of malformed.
    void validate() const;
};

enum class LinkState : std::uint8_t { none = 0, of = 1, hybrid = 2 };

// Pair of symmetric 0/1 matrices: X for optical fibre, Y for hybrid RF/FSO.
// set() keeps both matrices symmetric and exclusive; from_matrices() accepts
// arbitrary content so that malformed plans can still be checked.
class Plan {
public:
    Plan() = default;
    explicit Plan(std::size_t m) : x_(m, 0), y_(m, 0) {}

    static Plan from_matrices(SquareMatrix<std::uint8_t> x, SquareMatrix<std::uint8_t> y);

    std::size_t size() const noexcept { return x_.size(); }

    bool of(StationId i, StationId j) const { return x_(i, j) != 0; }
    bool hybrid(StationId i, StationId j) const { return y_(i, j) != 0; }
    bool linked(StationId i, StationId j) const { return of(i, j) || hybrid(i, j); }
    LinkState state(StationId i, StationId j) const;

    void set(StationId i, StationId j, LinkState state);

    const SquareMatrix<std::uint8_t>& x() const noexcept { return x_; }
    const SquareMatrix<std::uint8_t>& y() const noexcept { return y_; }

    // Upper-triangle link lists, i < j, lexicographic.
    std::vector<StationPair> of_links() const;
    std::vector<StationPair> hybrid_links() const;
    std::size_t link_count() const;

    bool operator==(const Plan&) const = default;

private:
    SquareMatrix<std::uint8_t> x_;
    SquareMatrix<std::uint8_t> y_;
};

struct LinkCosts {
    SquareMatrix<double> of;
    SquareMatrix<double> hybrid;
};

struct FeasibilityReport {
    // C1: symmetry, exclusivity, empty diagonal.
    bool exclusivity_ok = false;
    std::vector<StationPair> exclusivity_violations;
    // C2
    bool connectivity_ok = false;
    int min_path_diversity = 0;
    // C3
    bool reliability_ok = false;
    std::vector<double> node_reliability;
    // C4
    bool rate_ok = false;
    std::vector<double> node_rate;

    bool overall = false;
};

inline constexpr double kFeasibilityTolerance = 1e-9;

inline bool meets_threshold(double value, double threshold) {
    return value >= threshold - kFeasibilityTolerance;
}

inline std::int64_t to_cents(double dollars) { return std::llround(dollars * 100.0); }

double hybrid_reliability(double distance_m, const LinkModels& models, double alpha);
double hybrid_rate(double distance_m, const LinkModels& models, double target_rate);

LinkCosts link_costs(const Topology& topology, const LinkModels& models);

double node_reliability(const Plan& plan, const ProblemInstance& problem, StationId i);
double node_rate(const Plan& plan, const ProblemInstance& problem, StationId i);

FeasibilityReport check_feasibility(const Plan& plan, const ProblemInstance& problem);

// Sum over unordered pairs; each physical link is paid once.
double plan_cost(const Plan& plan, const LinkCosts& costs);

}  // namespace backnet

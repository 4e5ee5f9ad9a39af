#include <doctest.h>

#include <cmath>
#include <random>

#include "backnet/core_model.hpp"
#include "backnet/errors.hpp"
#include "support/instances.hpp"

using namespace backnet;
using backnet::testing::make_instance;
using backnet::testing::plan_with;

namespace {

const LinkModels kDefaults{};

}  // namespace

TEST_CASE("hybrid reliability plateau and decay") {
    CHECK(hybrid_reliability(1000.0, kDefaults, 0.95) == 0.95);
    CHECK(hybrid_reliability(2000.0, kDefaults, 0.95) == 0.95);
    // 0.95 * e^-1
    CHECK(hybrid_reliability(2500.0, kDefaults, 0.95) == doctest::Approx(0.95 * std::exp(-1.0)).epsilon(1e-12));

    LinkModels one = kDefaults;
    one.plateau = ReliabilityPlateau::one;
    CHECK(hybrid_reliability(1500.0, one, 0.95) == 1.0);
    CHECK(hybrid_reliability(2500.0, one, 0.95) == doctest::Approx(std::exp(-1.0)));
}

TEST_CASE("hybrid rate plateau and decay") {
    CHECK(hybrid_rate(2500.0, kDefaults, 4.0) == 4.0);
    CHECK(hybrid_rate(3000.0, kDefaults, 4.0) == 4.0);
    CHECK(hybrid_rate(3500.0, kDefaults, 4.0) == doctest::Approx(4.0 / std::exp(1.0)));
}

TEST_CASE("link models are continuous at the thresholds and non-increasing") {
    const double eps = 1e-6;
    CHECK(hybrid_reliability(2000.0 + eps, kDefaults, 0.95) == doctest::Approx(0.95).epsilon(1e-8));
    CHECK(hybrid_rate(3000.0 + eps, kDefaults, 1.0) == doctest::Approx(1.0).epsilon(1e-8));
    double last_r = 2.0;
    double last_d = 2.0;
    for (double d = 0.0; d <= 8000.0; d += 37.0) {
        const double r = hybrid_reliability(d, kDefaults, 0.95);
        const double rate = hybrid_rate(d, kDefaults, 1.0);
        CHECK(r <= last_r);
        CHECK(rate <= last_d);
        CHECK(r >= 0.0);
        last_r = r;
        last_d = rate;
    }
}

TEST_CASE("link costs follow length for OF and are flat for hybrid") {
    const auto topo = Topology::from_positions({{0, 0}, {1000, 0}, {1000, 0}});
    const auto costs = link_costs(topo, kDefaults);
    CHECK(costs.of(0, 1) == doctest::Approx(13'500.0));
    CHECK(costs.of(1, 0) == costs.of(0, 1));
    CHECK(costs.hybrid(0, 2) == 20'000.0);
    CHECK(costs.of(1, 2) == 0.0);
}

TEST_CASE("topology distances and validation") {
    const auto topo = Topology::from_positions({{0, 0}, {3, 4}, {-3, 4}});
    CHECK(topo.distance(0, 1) == 5.0);
    CHECK(topo.distance(1, 0) == 5.0);
    CHECK(topo.distance(1, 2) == 6.0);
    CHECK(topo.distance(2, 2) == 0.0);

    using Stations = std::vector<BaseStation>;
    CHECK_THROWS_AS(Topology(Stations{{0, {0, 0}}, {2, {1, 1}}}), InvalidInput);
    CHECK_THROWS_AS(Topology(Stations{{0, {0, 0}}, {0, {1, 1}}}), InvalidInput);
    CHECK_THROWS_AS(Topology(Stations{{0, {NAN, 0}}}), InvalidInput);
    // Ids may arrive out of order.
    const Topology shuffled(Stations{{1, {10, 0}}, {0, {0, 0}}});
    CHECK(shuffled.stations()[0].position.x_m == 0.0);
}

TEST_CASE("problem validation") {
    auto p = make_instance({{0, 0}, {100, 0}}, 1);
    CHECK_NOTHROW(p.validate());
    p.alpha = 1.5;
    CHECK_THROWS_AS(p.validate(), InvalidInput);
    p.alpha = 0.9;
    p.k = 0;
    CHECK_THROWS_AS(p.validate(), InvalidInput);
    p.k = 1;
    p.models.hybrid_cost_flat = 0.0;
    CHECK_THROWS_AS(p.validate(), InvalidInput);
}

TEST_CASE("plan setters keep symmetry and exclusivity") {
    Plan plan(3);
    plan.set(0, 1, LinkState::of);
    CHECK(plan.of(1, 0));
    plan.set(1, 0, LinkState::hybrid);
    CHECK_FALSE(plan.of(0, 1));
    CHECK(plan.hybrid(0, 1));
    CHECK(plan.state(1, 0) == LinkState::hybrid);
    CHECK_THROWS_AS(plan.set(2, 2, LinkState::of), InvalidInput);
    CHECK(plan.hybrid_links() == std::vector<StationPair>{{0, 1}});
}

TEST_CASE("node reliability") {
    // Two hybrid links of 1 km at opposite sides of station 0.
    const auto p = make_instance({{0, 0}, {1000, 0}, {-1000, 0}}, 1);
    CHECK(node_reliability(plan_with(3, {{0, 1}}), p, 0) == 1.0);
    CHECK(node_reliability(Plan(3), p, 0) == 0.0);
    CHECK(node_reliability(plan_with(3, {{0, 1}, {0, 2}}, LinkState::hybrid), p, 0) ==
          doctest::Approx(0.9975));
}

TEST_CASE("node rate") {
    const auto p = make_instance({{0, 0}, {2000, 0}, {-2000, 0}}, 1);
    CHECK(node_rate(plan_with(3, {{0, 1}}), p, 0) == 1.0);
    CHECK(node_rate(Plan(3), p, 0) == 0.0);
    CHECK(node_rate(plan_with(3, {{0, 1}, {0, 2}}, LinkState::hybrid), p, 0) == 2.0);
}

TEST_CASE("feasibility report") {
    SUBCASE("complete OF graph passes for every K < M") {
        for (int k = 1; k < 5; ++k) {
            const auto p = make_instance({{0, 0}, {500, 0}, {0, 900}, {700, 700}, {2000, 10}}, k);
            Plan plan(5);
            for (StationId i = 0; i < 5; ++i)
                for (StationId j = i + 1; j < 5; ++j) plan.set(i, j, LinkState::of);
            const auto r = check_feasibility(plan, p);
            CHECK(r.overall);
            CHECK(r.min_path_diversity == 4);
        }
    }
    SUBCASE("empty plan fails connectivity") {
        const auto p = make_instance({{0, 0}, {100, 0}, {0, 100}}, 1);
        const auto r = check_feasibility(Plan(3), p);
        CHECK_FALSE(r.connectivity_ok);
        CHECK(r.min_path_diversity == 0);
        CHECK_FALSE(r.overall);
    }
    SUBCASE("long hybrid link fails reliability") {
        const auto p = make_instance({{0, 0}, {10'000, 0}}, 1);
        const auto r = check_feasibility(plan_with(2, {{0, 1}}, LinkState::hybrid), p);
        CHECK(r.exclusivity_ok);
        CHECK(r.connectivity_ok);
        CHECK_FALSE(r.reliability_ok);
        CHECK_FALSE(r.overall);
    }
    SUBCASE("both link types on one pair fails C1") {
        SquareMatrix<std::uint8_t> x(2, 0);
        x(0, 1) = x(1, 0) = 1;
        const auto plan = Plan::from_matrices(x, x);
        const auto r = check_feasibility(plan, make_instance({{0, 0}, {100, 0}}, 1));
        CHECK_FALSE(r.exclusivity_ok);
        CHECK(r.exclusivity_violations == std::vector<StationPair>{{0, 1}});
    }
    SUBCASE("asymmetric matrices fail C1") {
        SquareMatrix<std::uint8_t> x(2, 0);
        x(0, 1) = 1;
        const auto plan = Plan::from_matrices(x, SquareMatrix<std::uint8_t>(2, 0));
        CHECK_FALSE(check_feasibility(plan, make_instance({{0, 0}, {100, 0}}, 1)).exclusivity_ok);
    }
    SUBCASE("dimension mismatch") {
        CHECK_THROWS_AS(check_feasibility(Plan(3), make_instance({{0, 0}, {1, 0}}, 1)),
                        InvalidInput);
    }
}

TEST_CASE("plan cost counts each link once") {
    const auto p = make_instance({{0, 0}, {1000, 0}, {0, 3000}}, 1);
    const auto costs = link_costs(p.topology, p.models);
    CHECK(plan_cost(Plan(3), costs) == 0.0);
    CHECK(plan_cost(plan_with(3, {{0, 1}}), costs) == doctest::Approx(13'500.0));
    Plan mixed = plan_with(3, {{0, 1}});
    mixed.set(0, 2, LinkState::hybrid);
    CHECK(plan_cost(mixed, costs) == doctest::Approx(33'500.0));
}

TEST_CASE("property: links only help reliability and rate; OF pins reliability to one") {
    std::mt19937_64 gen(7);
    for (int round = 0; round < 200; ++round) {
        const auto p = backnet::testing::random_instance(gen(), 6, 1);
        Plan plan(6);
        for (int step = 0; step < 10; ++step) {
            const StationId i = gen() % 6;
            StationId j = gen() % 6;
            if (i == j) j = (j + 1) % 6;
            if (plan.linked(i, j)) continue;
            std::vector<double> rel_before, rate_before;
            for (StationId s = 0; s < 6; ++s) {
                rel_before.push_back(node_reliability(plan, p, s));
                rate_before.push_back(node_rate(plan, p, s));
            }
            plan.set(i, j, gen() % 2 ? LinkState::of : LinkState::hybrid);
            for (StationId s = 0; s < 6; ++s) {
                CHECK(node_reliability(plan, p, s) >= rel_before[s]);
                CHECK(node_rate(plan, p, s) >= rate_before[s]);
                bool has_of = false;
                for (StationId t = 0; t < 6; ++t) has_of = has_of || (t != s && plan.of(s, t));
                if (has_of) CHECK(node_reliability(plan, p, s) == 1.0);
            }
        }
    }
}

TEST_CASE("property: plan cost is additive over disjoint link sets") {
    std::mt19937_64 gen(11);
    for (int round = 0; round < 100; ++round) {
        const auto p = backnet::testing::random_instance(gen(), 7, 1);
        const auto costs = link_costs(p.topology, p.models);
        Plan a(7), b(7), both(7);
        for (StationId i = 0; i < 7; ++i) {
            for (StationId j = i + 1; j < 7; ++j) {
                const auto pick = gen() % 5;
                const auto state = gen() % 2 ? LinkState::of : LinkState::hybrid;
                if (pick == 0) a.set(i, j, state);
                if (pick == 1) b.set(i, j, state);
                if (pick <= 1) both.set(i, j, state);
            }
        }
        CHECK(plan_cost(both, costs) ==
              doctest::Approx(plan_cost(a, costs) + plan_cost(b, costs)).epsilon(1e-12));
    }
}

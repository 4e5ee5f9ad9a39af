// Acceptance suite. One line per criterion: [PASS] or [FAIL], the pinned
// tolerance, and the measured numbers.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <map>
#include <random>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "backnet/connectivity.hpp"
#include "backnet/errors.hpp"
#include "backnet/hybrid_planner.hpp"
#include "backnet/of_planner.hpp"
#include "backnet/oracle.hpp"
#include "backnet/simharness.hpp"
#include "support/disjoint_paths_oracle.hpp"

using namespace backnet;

namespace {

constexpr std::uint64_t kSeed = 20'240'601;

struct Verdict {
    bool pass = false;
    std::string detail;
};

ExperimentConfig placement_config(std::vector<std::size_t> ms, std::vector<int> ks,
                                  std::size_t trials, std::uint64_t seed = kSeed) {
    ExperimentConfig c;
    c.m_values = std::move(ms);
    c.k_values = std::move(ks);
    c.trials = trials;
    c.seed = seed;
    return c;
}

bool contains(const Plan& outer, const Plan& inner) {
    for (StationId i = 0; i < inner.size(); ++i)
        for (StationId j = 0; j < inner.size(); ++j)
            if (inner.of(i, j) && !outer.of(i, j)) return false;
    return true;
}

// Criteria 1 and 6 share one sweep: 11 cells x 20 trials = 220 instances.
struct OfSweep {
    std::size_t instances = 0;
    std::size_t equal = 0;
    std::size_t nested = 0;
    std::size_t rounds_checked = 0;
    std::map<std::pair<std::size_t, int>, std::pair<std::size_t, std::size_t>> per_cell;
    std::string first_mismatch;
    std::string csv;
};

OfSweep of_sweep() {
    const auto c = placement_config({3, 4, 5, 6}, {1, 2, 3}, 20);
    OfSweep s;
    s.csv = "M,K,trial,of_planning_cents,oracle_cents\n";
    for (const auto& [m, k] : c.cells()) {
        for (std::size_t t = 0; t < c.trials; ++t) {
            const auto p = generate_instance(c, m, k, t);
            const auto costs = link_costs(p.topology, p.models);
            const auto rounds = of_planning_rounds(p);
            const auto planned = to_cents(plan_cost(rounds.back(), costs));
            const auto oracle = to_cents(brute_force_of(p).cost);
            ++s.instances;
            auto& cell = s.per_cell[{m, k}];
            ++cell.second;
            if (planned == oracle) {
                ++s.equal;
                ++cell.first;
            } else if (s.first_mismatch.empty()) {
                s.first_mismatch = fmt::format("M={} K={} trial={}: {} vs {} cents", m, k, t,
                                               planned, oracle);
            }
            bool nested = true;
            for (std::size_t r = 1; r < rounds.size(); ++r) {
                ++s.rounds_checked;
                nested = nested && contains(rounds[r], rounds[r - 1]);
            }
            s.nested += nested;
            s.csv += fmt::format("{},{},{},{},{}\n", m, k, t, planned, oracle);
        }
    }
    return s;
}

Verdict criterion_1() {
    const auto s = of_sweep();
    std::string cells;
    for (const auto& [key, v] : s.per_cell) {
        cells += fmt::format(" M{}K{}={}/{}", key.first, key.second, v.first, v.second);
    }
    return {s.instances >= 200 && s.equal == s.instances,
            fmt::format("OF planning cost == OF-only optimum (integer cents, tolerance 0): "
                        "{}/{} instances;{}{}",
                        s.equal, s.instances, cells,
                        s.first_mismatch.empty() ? "" : "; first mismatch " + s.first_mismatch)};
}

Verdict criterion_2() {
    const auto c = placement_config({3, 4, 5, 6, 7, 8, 9, 10}, {1, 2, 3}, 22);
    std::size_t total = 0;
    std::size_t feasible = 0;
    std::string first_failure;
    for (const auto& [m, k] : c.cells()) {
        for (std::size_t t = 0; t < c.trials; ++t) {
            ++total;
            const auto p = generate_instance(c, m, k, t);
            try {
                if (check_feasibility(hybrid_planning(p).plan, p).overall) {
                    ++feasible;
                    continue;
                }
                if (first_failure.empty()) first_failure = fmt::format("M={} K={} #{}", m, k, t);
            } catch (const Error& e) {
                if (first_failure.empty()) {
                    first_failure = fmt::format("M={} K={} #{}: {}", m, k, t, e.what());
                }
            }
        }
    }
    return {total >= 500 && feasible == total,
            fmt::format("hybrid plans pass C1-C4 (threshold tolerance 1e-9): {}/{} instances{}",
                        feasible, total, first_failure.empty() ? "" : "; first " + first_failure)};
}

Verdict criterion_3() {
    const auto c = placement_config({3, 4, 5}, {1, 2, 3}, 25);
    std::size_t total = 0;
    std::size_t ordered = 0;
    double gap_sum = 0.0;
    for (const auto& [m, k] : c.cells()) {
        for (std::size_t t = 0; t < c.trials; ++t) {
            const auto p = generate_instance(c, m, k, t);
            const auto oracle = brute_force_original(p).cost;
            const auto hybrid = hybrid_planning(p);
            ++total;
            if (to_cents(oracle) <= to_cents(hybrid.hybrid_plan_cost) &&
                to_cents(hybrid.hybrid_plan_cost) <= to_cents(hybrid.of_plan_cost)) {
                ++ordered;
            }
            gap_sum += (hybrid.hybrid_plan_cost - oracle) / oracle;
        }
    }
    return {total > 0 && ordered == total,
            fmt::format("oracle <= hybrid <= OF (integer cents, tolerance 0): {}/{} instances "
                        "with M<=5; mean relative hybrid-oracle gap {:.4f}",
                        ordered, total, gap_sum / static_cast<double>(total))};
}

Verdict criterion_4() {
    const auto c = placement_config({2, 3, 4}, {1, 2, 3}, 20);
    std::size_t total = 0;
    std::size_t held = 0;
    for (const auto& [m, k] : c.cells()) {
        for (std::size_t t = 0; t < c.trials; ++t) {
            ++total;
            held += redundancy_check(generate_instance(c, m, k, t));
        }
    }
    return {total >= 100 && held == total,
            fmt::format("every K-connected OF-only subset meets alpha and D_t: {}/{} "
                        "instances with M<=4",
                        held, total)};
}

Verdict criterion_5() {
    std::mt19937_64 gen(kSeed);
    std::vector<std::pair<std::size_t, testing::EdgeList>> corpus;
    // Every graph on up to 4 nodes, then random graphs on 5 and 6 nodes.
    for (std::size_t n = 2; n <= 4; ++n) {
        std::vector<std::pair<std::size_t, std::size_t>> pairs;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) pairs.emplace_back(i, j);
        for (std::uint64_t code = 0; code < (std::uint64_t{1} << pairs.size()); ++code) {
            testing::EdgeList edges;
            for (std::size_t q = 0; q < pairs.size(); ++q)
                if (code >> q & 1U) edges.push_back(pairs[q]);
            corpus.emplace_back(n, edges);
        }
    }
    while (corpus.size() < 1'200) {
        const std::size_t n = 5 + gen() % 2;
        std::vector<std::pair<std::size_t, std::size_t>> pairs;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) pairs.emplace_back(i, j);
        std::shuffle(pairs.begin(), pairs.end(), gen);
        pairs.resize(gen() % 10);
        corpus.emplace_back(n, pairs);
    }

    std::size_t queries = 0;
    std::size_t agree = 0;
    std::size_t graphs_ok = 0;
    for (const auto& [n, edges] : corpus) {
        Plan plan(n);
        for (const auto& [i, j] : edges) plan.set(i, j, LinkState::of);
        bool ok = true;
        int global = n < 2 ? 0 : 1 << 20;
        for (StationId s = 0; s < n; ++s) {
            for (StationId t = s + 1; t < n; ++t) {
                const int expected = testing::enumerate_disjoint_paths(n, edges, s, t);
                global = std::min(global, expected);
                ++queries;
                const bool same = path_diversity(plan, s, t) == expected &&
                                  path_diversity(plan, t, s) == expected;
                agree += same;
                ok = ok && same;
            }
        }
        ok = ok && min_path_diversity(plan) == global;
        graphs_ok += ok;
    }
    return {corpus.size() >= 1'000 && graphs_ok == corpus.size(),
            fmt::format("max-flow path diversity == exhaustive path packing (exact): {}/{} "
                        "graphs, {}/{} pairs, <=6 nodes, <=9 edges",
                        graphs_ok, corpus.size(), agree, queries)};
}

Verdict criterion_6() {
    const auto s = of_sweep();
    return {s.instances > 0 && s.nested == s.instances,
            fmt::format("round k links contain round k-1 links: {}/{} runs ({} round pairs)",
                        s.nested, s.instances, s.rounds_checked)};
}

ExperimentConfig trend_config() {
    auto c = placement_config({5, 6, 7}, {1, 2, 3}, 100);
    return c;
}

Verdict criterion_7() {
    const auto c = trend_config();
    const auto r = run_experiment(c);
    std::map<std::pair<std::size_t, int>, AggregateRow> rows;
    std::size_t failed = 0;
    for (const auto& row : r.aggregate) {
        rows[{row.m, row.k}] = row;
        failed += row.trials_failed;
    }
    bool a = failed == 0;
    bool b = true;
    bool cc = true;
    std::string table;
    for (std::size_t m : c.m_values) {
        for (int k : c.k_values) {
            const auto& row = rows.at({m, k});
            a = a && to_cents(row.mean_hybrid_cost) <= to_cents(row.mean_of_cost);
            table += fmt::format(" M{}K{}:of={:.0f},hy={:.0f},fr={:.3f}", m, k, row.mean_of_cost,
                                 row.mean_hybrid_cost, row.mean_of_fraction);
            if (k == c.k_values.front()) continue;
            const auto& prev = rows.at({m, k - 1});
            b = b && row.mean_of_fraction <= prev.mean_of_fraction + 1e-12;
            cc = cc && to_cents(row.mean_of_cost) >= to_cents(prev.mean_of_cost) &&
                 to_cents(row.mean_hybrid_cost) >= to_cents(prev.mean_hybrid_cost);
        }
    }
    return {a && b && cc,
            fmt::format("cell means, 100 trials/cell: (a) hybrid <= OF [{}] (b) OF fraction "
                        "non-increasing in K, tolerance 1e-12 [{}] (c) costs non-decreasing in K, "
                        "integer cents [{}]; failed trials {};{}",
                        a ? "ok" : "violated", b ? "ok" : "violated", cc ? "ok" : "violated",
                        failed, table)};
}

Verdict criterion_8() {
    const auto first = of_sweep().csv;
    const auto second = of_sweep().csv;

    auto serial = trend_config();
    serial.threads = 1;
    auto parallel = trend_config();
    parallel.threads = 4;
    const auto a = aggregate_csv(run_experiment(serial), serial);
    const auto b = aggregate_csv(run_experiment(parallel), parallel);
    const auto c = aggregate_csv(run_experiment(serial), serial);
    const bool sweep_same = first == second;
    const bool trend_same = a == b && a == c;
    return {sweep_same && trend_same,
            fmt::format("byte-identical output on repeat (same seed {}): criterion-1 table [{}, "
                        "{} bytes], trend aggregate CSV over 1 and 4 workers [{}, {} bytes]",
                        kSeed, sweep_same ? "identical" : "differs", first.size(),
                        trend_same ? "identical" : "differs", a.size())};
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Acceptance criteria"};
    int only = 0;
    app.add_option("--criterion", only, "Run a single criterion (1-8); 0 runs all")
        ->check(CLI::Range(0, 8));
    CLI11_PARSE(app, argc, argv);

    const std::vector<std::function<Verdict()>> criteria{
        criterion_1, criterion_2, criterion_3, criterion_4,
        criterion_5, criterion_6, criterion_7, criterion_8};
    bool all = true;
    for (std::size_t n = 1; n <= criteria.size(); ++n) {
        if (only != 0 && static_cast<std::size_t>(only) != n) continue;
        const auto start = std::chrono::steady_clock::now();
        Verdict v;
        try {
            v = criteria[n - 1]();
        } catch (const std::exception& e) {
            v = {false, fmt::format("aborted: {}", e.what())};
        }
        const double seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        fmt::print("[{}] AC{} {} ({:.1f} s)\n", v.pass ? "PASS" : "FAIL", n, v.detail, seconds);
        std::fflush(stdout);
        all = all && v.pass;
    }
    return all ? 0 : 1;
}

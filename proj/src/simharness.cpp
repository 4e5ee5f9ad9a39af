#include "backnet/simharness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <fstream>
#include <map>
#include <random>
#include <thread>

#include <fmt/format.h>

#include "backnet/errors.hpp"
#include "backnet/hybrid_planner.hpp"
#include "backnet/log.hpp"
#include "backnet/of_planner.hpp"

namespace backnet {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Top 53 bits as a double in [0, 1); identical on every platform, unlike
// std::uniform_real_distribution.
double unit_interval(std::mt19937_64& gen) {
    return static_cast<double>(gen() >> 11) * 0x1.0p-53;
}

std::optional<double> of_share(const Plan& plan) {
    const std::size_t links = plan.link_count();
    if (links == 0) return std::nullopt;
    return static_cast<double>(plan.of_links().size()) / static_cast<double>(links);
}

double elapsed_ms(std::chrono::steady_clock::time_point since) {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - since)
        .count();
}

std::string opt(const std::optional<double>& v, const char* spec) {
    return v ? fmt::format(fmt::runtime(spec), *v) : std::string();
}

}  // namespace

void ExperimentConfig::validate() const {
    if (!(area_side_m > 0.0)) throw InvalidInput("area_side_m must be > 0");
    if (trials < 1) throw InvalidInput("trials must be >= 1");
    if (m_values.empty() || k_values.empty()) {
        throw InvalidInput("M_values and K_values must be non-empty");
    }
    for (std::size_t m : m_values) {
        if (m < 2) throw InvalidInput(fmt::format("every M must be >= 2, got {}", m));
    }
    for (int k : k_values) {
        if (k < 1) throw InvalidInput(fmt::format("every K must be >= 1, got {}", k));
    }
    if (cells().empty()) throw InvalidInput("no (M, K) cell satisfies K < M");
    if (!(alpha >= 0.0 && alpha <= 1.0)) throw InvalidInput("alpha must lie in [0, 1]");
    if (!(target_rate > 0.0)) throw InvalidInput("D_t must be > 0");
    if (!(min_separation_m >= 0.0)) throw InvalidInput("min_separation_m must be >= 0");
    models.validate();
}

std::vector<std::pair<std::size_t, int>> ExperimentConfig::cells() const {
    std::vector<std::pair<std::size_t, int>> out;
    for (std::size_t m : m_values) {
        for (int k : k_values) {
            if (k >= 1 && static_cast<std::size_t>(k) < m) out.emplace_back(m, k);
        }
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

ExperimentConfig config_from_json(const Json& doc) {
    if (!doc.is_object()) throw ParseError("experiment config must be a JSON object");
    ExperimentConfig c;
    try {
        c.area_side_m = doc.value("area_side_m", c.area_side_m);
        c.m_values = doc.value("M_values", c.m_values);
        c.k_values = doc.value("K_values", c.k_values);
        c.trials = doc.value("trials", c.trials);
        c.seed = doc.value("seed", c.seed);
        c.alpha = doc.value("alpha", c.alpha);
        c.target_rate = doc.value("D_t", c.target_rate);
        c.oracle_enabled = doc.value("oracle_enabled", c.oracle_enabled);
        c.oracle_cap = doc.value("oracle_cap", c.oracle_cap);
        c.min_separation_m = doc.value("min_separation_m", c.min_separation_m);
        c.threads = doc.value("threads", c.threads);
    } catch (const Json::exception& e) {
        throw ParseError(fmt::format("experiment config: {}", e.what()));
    }
    if (doc.contains("models")) c.models = models_from_json(doc.at("models"));
    try {
        c.validate();
    } catch (const InvalidInput& e) {
        throw ParseError(e.what());
    }
    return c;
}

Json config_to_json(const ExperimentConfig& c) {
    return Json{{"area_side_m", c.area_side_m},     {"M_values", c.m_values},
                {"K_values", c.k_values},           {"trials", c.trials},
                {"seed", c.seed},                   {"alpha", c.alpha},
                {"D_t", c.target_rate},             {"models", models_to_json(c.models)},
                {"oracle_enabled", c.oracle_enabled}, {"oracle_cap", c.oracle_cap},
                {"min_separation_m", c.min_separation_m}, {"threads", c.threads}};
}

ProblemInstance generate_instance(const ExperimentConfig& config, std::size_t m, int k,
                                  std::size_t trial) {
    std::uint64_t state = splitmix64(config.seed);
    state = splitmix64(state ^ static_cast<std::uint64_t>(m));
    state = splitmix64(state ^ static_cast<std::uint64_t>(trial));
    std::mt19937_64 gen(state);

    std::vector<Position> positions(m);
    for (;;) {
        for (auto& p : positions) {
            p.x_m = unit_interval(gen) * config.area_side_m;
            p.y_m = unit_interval(gen) * config.area_side_m;
        }
        bool separated = true;
        for (std::size_t i = 0; i < m && separated; ++i) {
            for (std::size_t j = i + 1; j < m && separated; ++j) {
                separated = std::hypot(positions[i].x_m - positions[j].x_m,
                                       positions[i].y_m - positions[j].y_m) >=
                            config.min_separation_m;
            }
        }
        if (separated) break;
    }

    ProblemInstance problem;
    problem.topology = Topology::from_positions(positions);
    problem.k = k;
    problem.alpha = config.alpha;
    problem.target_rate = config.target_rate;
    problem.models = config.models;
    return problem;
}

TrialRecord run_trial(const ExperimentConfig& config, std::size_t m, int k, std::size_t trial) {
    TrialRecord record;
    record.m = m;
    record.k = k;
    record.trial = trial;
    try {
        const ProblemInstance problem = generate_instance(config, m, k, trial);
        const LinkCosts costs = link_costs(problem.topology, problem.models);

        auto start = std::chrono::steady_clock::now();
        const Plan of_plan = of_planning(problem);
        record.of_runtime_ms = elapsed_ms(start);
        record.of_cost = plan_cost(of_plan, costs);
        record.of_fraction_of = of_share(of_plan);

        start = std::chrono::steady_clock::now();
        const auto hybrid = hybrid_planning(problem);
        record.hybrid_runtime_ms = elapsed_ms(start);
        record.hybrid_cost = hybrid.hybrid_plan_cost;
        record.of_fraction_hybrid = of_share(hybrid.plan);
        record.assumption_violated = hybrid.assumption_violated;

        if (config.oracle_enabled && m <= config.oracle_cap) {
            start = std::chrono::steady_clock::now();
            record.oracle_cost = brute_force_original(problem, config.oracle_cap).cost;
            record.oracle_runtime_ms = elapsed_ms(start);
        }
    } catch (const Error& e) {
        record.error = fmt::format("{}: {}", e.kind(), e.what());
        log::info("trial M={} K={} #{} failed: {}", m, k, trial, record.error);
    }
    return record;
}

ExperimentResult run_experiment(const ExperimentConfig& config) {
    config.validate();
    struct Task {
        std::size_t m;
        int k;
        std::size_t trial;
    };
    std::vector<Task> tasks;
    for (const auto& [m, k] : config.cells()) {
        for (std::size_t t = 0; t < config.trials; ++t) tasks.push_back({m, k, t});
    }

    ExperimentResult result;
    result.trials.resize(tasks.size());
    std::atomic<std::size_t> next{0};
    const auto worker = [&] {
        for (std::size_t i = next++; i < tasks.size(); i = next++) {
            result.trials[i] = run_trial(config, tasks[i].m, tasks[i].k, tasks[i].trial);
        }
    };
    std::size_t threads = config.threads != 0 ? config.threads
                                              : std::max(1u, std::thread::hardware_concurrency());
    threads = std::min(threads, tasks.size());
    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
    }

    // Tasks are generated in (M, K, trial) order, so the slots already are.
    result.aggregate = aggregate(result.trials);
    return result;
}

std::vector<AggregateRow> aggregate(const std::vector<TrialRecord>& trials) {
    struct Sums {
        AggregateRow row;
        double oracle_sum = 0.0;
        std::size_t oracle_n = 0;
    };
    std::map<std::pair<std::size_t, int>, Sums> cells;
    for (const auto& t : trials) {
        auto& cell = cells[{t.m, t.k}];
        cell.row.m = t.m;
        cell.row.k = t.k;
        const bool ok = t.error.empty() && t.of_cost && t.hybrid_cost;
        if (!ok) {
            ++cell.row.trials_failed;
            continue;
        }
        ++cell.row.trials_ok;
        cell.row.mean_of_cost += *t.of_cost;
        cell.row.mean_hybrid_cost += *t.hybrid_cost;
        cell.row.mean_of_fraction += t.of_fraction_hybrid.value_or(0.0);
        if (t.oracle_cost) {
            cell.oracle_sum += *t.oracle_cost;
            ++cell.oracle_n;
        }
    }
    std::vector<AggregateRow> out;
    for (auto& [key, cell] : cells) {
        auto row = cell.row;
        if (row.trials_ok > 0) {
            const auto n = static_cast<double>(row.trials_ok);
            row.mean_of_cost /= n;
            row.mean_hybrid_cost /= n;
            row.mean_of_fraction /= n;
        }
        if (cell.oracle_n > 0) row.mean_oracle_cost = cell.oracle_sum / static_cast<double>(cell.oracle_n);
        out.push_back(row);
    }
    return out;
}

namespace {

std::string csv_preamble(const ExperimentConfig& config) {
    return fmt::format(
        "# generator: {}; seed={}\n"
        "# units: money in dollars, distances in meters\n",
        kGeneratorDescription, config.seed);
}

}  // namespace

std::string trials_csv(const ExperimentResult& result, const ExperimentConfig& config) {
    std::string out = csv_preamble(config);
    out +=
        "M,K,trial,of_cost,hybrid_cost,oracle_cost,of_fraction_hybrid,runtime_ms,"
        "of_fraction_of,of_runtime_ms,hybrid_runtime_ms,oracle_runtime_ms,assumption_violated,"
        "error\n";
    for (const auto& t : result.trials) {
        std::string error = t.error;
        std::replace(error.begin(), error.end(), '"', '\'');
        out += fmt::format(
            "{},{},{},{},{},{},{},{:.3f},{},{:.3f},{:.3f},{:.3f},{},{}\n", t.m, t.k, t.trial,
            opt(t.of_cost, "{:.4f}"), opt(t.hybrid_cost, "{:.4f}"), opt(t.oracle_cost, "{:.4f}"),
            opt(t.of_fraction_hybrid, "{:.6f}"),
            t.of_runtime_ms + t.hybrid_runtime_ms + t.oracle_runtime_ms,
            opt(t.of_fraction_of, "{:.6f}"), t.of_runtime_ms, t.hybrid_runtime_ms,
            t.oracle_runtime_ms, t.assumption_violated ? 1 : 0,
            error.empty() ? std::string() : fmt::format("\"{}\"", error));
    }
    return out;
}

std::string aggregate_csv(const ExperimentResult& result, const ExperimentConfig& config) {
    std::string out = csv_preamble(config);
    out +=
        "# acceptance is trend-based: placements are random and no reference values exist\n";
    out += "M,K,mean_of_cost,mean_hybrid_cost,mean_of_fraction,mean_oracle_cost,trials_ok,"
           "trials_failed\n";
    for (const auto& row : result.aggregate) {
        out += fmt::format("{},{},{:.4f},{:.4f},{:.6f},{},{},{}\n", row.m, row.k,
                           row.mean_of_cost, row.mean_hybrid_cost, row.mean_of_fraction,
                           opt(row.mean_oracle_cost, "{:.4f}"), row.trials_ok,
                           row.trials_failed);
    }
    return out;
}

void write_experiment(const ExperimentResult& result, const ExperimentConfig& config,
                      const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    const auto write = [](const std::filesystem::path& path, const std::string& text) {
        std::ofstream out(path, std::ios::binary);
        if (!out) throw InvalidInput(fmt::format("cannot write {}", path.string()));
        out << text;
    };
    write(dir / "trials.csv", trials_csv(result, config));
    write(dir / "aggregate.csv", aggregate_csv(result, config));
}

}  // namespace backnet

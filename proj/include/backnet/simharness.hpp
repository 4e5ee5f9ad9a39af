#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "backnet/core_model.hpp"
#include "backnet/io.hpp"
#include "backnet/oracle.hpp"

namespace backnet {

struct ExperimentConfig {
    double area_side_m = 5'000.0;
    std::vector<std::size_t> m_values{4, 5, 6, 7, 8};
    std::vector<int> k_values{1, 2, 3};
    std::size_t trials = 100;
    std::uint64_t seed = 1;
    double alpha = 0.95;
    double target_rate = 1.0;
    LinkModels models;
    bool oracle_enabled = false;
    std::size_t oracle_cap = kOriginalOracleCap;
    double min_separation_m = 1.0;
    std::size_t threads = 0;  // 0: one per hardware thread

    void validate() const;
    // (M, K) cells in ascending order; cells with K >= M are skipped.
    std::vector<std::pair<std::size_t, int>> cells() const;
};

ExperimentConfig config_from_json(const Json& doc);
Json config_to_json(const ExperimentConfig& config);

struct TrialRecord {
    std::size_t m = 0;
    int k = 0;
    std::size_t trial = 0;
    std::optional<double> of_cost;
    std::optional<double> hybrid_cost;
    std::optional<double> oracle_cost;
    std::optional<double> of_fraction_of;      // OF share of links in the OF plan
    std::optional<double> of_fraction_hybrid;  // OF share of links in the hybrid plan
    bool assumption_violated = false;
    double of_runtime_ms = 0.0;
    double hybrid_runtime_ms = 0.0;
    double oracle_runtime_ms = 0.0;
    std::string error;
};

struct AggregateRow {
    std::size_t m = 0;
    int k = 0;
    std::size_t trials_ok = 0;
    std::size_t trials_failed = 0;
    double mean_of_cost = 0.0;
    double mean_hybrid_cost = 0.0;
    double mean_of_fraction = 0.0;  // hybrid plan
    std::optional<double> mean_oracle_cost;
};

struct ExperimentResult {
    std::vector<TrialRecord> trials;  // sorted by (M, K, trial)
    std::vector<AggregateRow> aggregate;
};

inline constexpr const char* kGeneratorDescription =
    "mt19937_64 per placement, seeded by splitmix64(seed, M, trial)";

// Uniform i.i.d. positions in the square, redrawn while two stations are
// closer than min_separation_m. The placement depends on (seed, M, trial)
// only, so every K of one trial sees the same stations.
ProblemInstance generate_instance(const ExperimentConfig& config, std::size_t m, int k,
                                  std::size_t trial);

TrialRecord run_trial(const ExperimentConfig& config, std::size_t m, int k, std::size_t trial);

ExperimentResult run_experiment(const ExperimentConfig& config);

std::vector<AggregateRow> aggregate(const std::vector<TrialRecord>& trials);

std::string trials_csv(const ExperimentResult& result, const ExperimentConfig& config);
std::string aggregate_csv(const ExperimentResult& result, const ExperimentConfig& config);

// Writes trials.csv and aggregate.csv into dir (created if needed).
void write_experiment(const ExperimentResult& result, const ExperimentConfig& config,
                      const std::filesystem::path& dir);

}  // namespace backnet

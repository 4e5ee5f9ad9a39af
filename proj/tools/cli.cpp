#include "cli.hpp"

#include <algorithm>
#include <fstream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "backnet/errors.hpp"
#include "backnet/hybrid_planner.hpp"
#include "backnet/io.hpp"
#include "backnet/log.hpp"
#include "backnet/of_planner.hpp"
#include "backnet/oracle.hpp"
#include "backnet/simharness.hpp"

namespace backnet::cli {

namespace {

struct Options {
    std::string instance;
    std::string plan;
    std::string out;
    std::string format = "json";
    std::string planner = "hybrid";
    std::size_t caps = kOriginalOracleCap;
    std::string config;
    std::optional<std::uint64_t> seed;
};

int exit_code_for(const Error& e) {
    if (dynamic_cast<const ParseError*>(&e)) return kParseError;
    if (dynamic_cast<const InternalConsistency*>(&e)) return kInternalError;
    if (dynamic_cast<const CapExceeded*>(&e) || dynamic_cast<const CombinatorialLimit*>(&e)) {
        return kCapExceeded;
    }
    return kInfeasible;
}

void emit(const Options& opts, std::ostream& out, const std::string& text) {
    if (opts.out.empty()) {
        out << text;
        return;
    }
    std::ofstream file(opts.out, std::ios::binary);
    if (!file) throw ParseError(fmt::format("cannot write {}", opts.out));
    file << text;
}

std::string links_csv(const Plan& plan) {
    std::string text = "i,j,type\n";
    for (const auto& [i, j] : plan.of_links()) text += fmt::format("{},{},of\n", i, j);
    for (const auto& [i, j] : plan.hybrid_links()) text += fmt::format("{},{},hybrid\n", i, j);
    return text;
}

int cmd_plan(const Options& opts, std::ostream& out) {
    const ProblemInstance problem = load_instance(opts.instance);
    const LinkCosts costs = link_costs(problem.topology, problem.models);

    Plan plan;
    Json metadata;
    if (opts.planner == "of") {
        plan = of_planning(problem);
        const double cost = plan_cost(plan, costs);
        metadata = {{"of_plan_cost", cost}};
    } else {
        const auto result = hybrid_planning(problem);
        plan = result.plan;
        metadata = {{"of_plan_cost", result.of_plan_cost},
                    {"hybrid_plan_cost", result.hybrid_plan_cost},
                    {"assumption_violated", result.assumption_violated},
                    {"planning_graph_stats",
                     {{"vertices", result.graph_vertices}, {"edges", result.graph_edges}}}};
    }
    const double cost = plan_cost(plan, costs);
    log::info("{} planning: {} links, cost {:.2f}", opts.planner, plan.link_count(), cost);

    if (opts.format == "csv") {
        emit(opts, out, links_csv(plan));
        return kOk;
    }
    Json doc = plan_to_json(plan);
    doc["planner"] = opts.planner;
    doc["cost"] = cost;
    doc["metadata"] = metadata;
    emit(opts, out, doc.dump(2) + "\n");
    return kOk;
}

int cmd_validate(const Options& opts, std::ostream& out) {
    const ProblemInstance problem = load_instance(opts.instance);
    const Plan plan = plan_from_json(read_json_file(opts.plan), problem.size());
    const auto report = check_feasibility(plan, problem);
    if (opts.format == "csv") {
        emit(opts, out,
             fmt::format("constraint,pass\nC1,{}\nC2,{}\nC3,{}\nC4,{}\noverall,{}\n",
                         report.exclusivity_ok, report.connectivity_ok, report.reliability_ok,
                         report.rate_ok, report.overall));
    } else {
        emit(opts, out, report_to_json(report).dump(2) + "\n");
    }
    return report.overall ? kOk : kPlanInfeasible;
}

int cmd_oracle(const Options& opts, std::ostream& out) {
    const ProblemInstance problem = load_instance(opts.instance);
    if (problem.size() > opts.caps) {
        throw CapExceeded(fmt::format("oracle is capped at M = {}; instance has M = {}",
                                      opts.caps, problem.size()));
    }
    const auto oracle = brute_force_original(problem, opts.caps);
    const auto hybrid = hybrid_planning(problem);
    const double of_cost = hybrid.of_plan_cost;
    const double hybrid_cost = hybrid.hybrid_plan_cost;
    const auto relative = [&](double cost) {
        return oracle.cost > 0.0 ? (cost - oracle.cost) / oracle.cost : 0.0;
    };
    if (opts.format == "csv") {
        emit(opts, out,
             fmt::format("oracle_cost,hybrid_cost,of_cost,hybrid_gap_rel,of_gap_rel\n"
                         "{:.4f},{:.4f},{:.4f},{:.6f},{:.6f}\n",
                         oracle.cost, hybrid_cost, of_cost, relative(hybrid_cost),
                         relative(of_cost)));
        return kOk;
    }
    const Json doc{{"oracle_cost", oracle.cost},
                   {"hybrid_cost", hybrid_cost},
                   {"of_cost", of_cost},
                   {"gaps",
                    {{"hybrid_minus_oracle", hybrid_cost - oracle.cost},
                     {"hybrid_relative", relative(hybrid_cost)},
                     {"of_minus_oracle", of_cost - oracle.cost},
                     {"of_relative", relative(of_cost)}}},
                   {"oracle_explored", oracle.explored},
                   {"oracle_plan", plan_to_json(oracle.plan)},
                   {"hybrid_plan", plan_to_json(hybrid.plan)},
                   {"of_plan", plan_to_json(hybrid.of_plan)}};
    emit(opts, out, doc.dump(2) + "\n");
    return kOk;
}

int cmd_simulate(const Options& opts, std::ostream& out) {
    ExperimentConfig config = opts.config.empty() ? ExperimentConfig{}
                                                  : config_from_json(read_json_file(opts.config));
    if (opts.seed) config.seed = *opts.seed;
    const auto result = run_experiment(config);
    const std::filesystem::path dir = opts.out.empty() ? "." : opts.out;
    write_experiment(result, config, dir);

    const auto failed = std::count_if(result.trials.begin(), result.trials.end(),
                                      [](const TrialRecord& t) { return !t.error.empty(); });
    if (failed > 0) {
        log::error("{} of {} trials failed; see the error column of trials.csv", failed,
                   result.trials.size());
    }
    if (opts.format == "json") {
        Json rows = Json::array();
        for (const auto& row : result.aggregate) {
            rows.push_back({{"M", row.m},
                            {"K", row.k},
                            {"mean_of_cost", row.mean_of_cost},
                            {"mean_hybrid_cost", row.mean_hybrid_cost},
                            {"mean_of_fraction", row.mean_of_fraction},
                            {"trials_ok", row.trials_ok},
                            {"trials_failed", row.trials_failed}});
        }
        out << rows.dump(2) << "\n";
    } else {
        out << aggregate_csv(result, config);
    }
    return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Resilient backhaul planning with optical fibre and hybrid RF/FSO links",
                 "backnet"};
    app.require_subcommand(1);
    Options opts;

    const auto add_format = [&](CLI::App* cmd) {
        cmd->add_option("--format", opts.format, "Output format")
            ->check(CLI::IsMember({"json", "csv"}));
        cmd->add_option("--out", opts.out, "Write output to this path instead of stdout");
    };

    auto* plan = app.add_subcommand("plan", "Compute an OF or hybrid plan for an instance");
    plan->add_option("--instance", opts.instance, "Instance JSON")->required();
    plan->add_option("--planner", opts.planner, "Planner")->check(CLI::IsMember({"of", "hybrid"}));
    add_format(plan);

    auto* validate = app.add_subcommand("validate", "Check a plan against all constraints");
    validate->add_option("--instance", opts.instance, "Instance JSON")->required();
    validate->add_option("--plan", opts.plan, "Plan JSON")->required();
    add_format(validate);

    auto* oracle = app.add_subcommand("oracle", "Compare both planners with exhaustive search");
    oracle->add_option("--instance", opts.instance, "Instance JSON")->required();
    oracle->add_option("--caps", opts.caps, "Largest M the exhaustive search accepts");
    add_format(oracle);

    auto* simulate = app.add_subcommand("simulate", "Run a Monte Carlo experiment");
    simulate->add_option("--config", opts.config, "Experiment config JSON");
    simulate->add_option("--seed", opts.seed, "Override the config seed");
    simulate->add_option("--format", opts.format, "Summary format on stdout")
        ->check(CLI::IsMember({"json", "csv"}));
    simulate->add_option("--out", opts.out, "Directory for trials.csv and aggregate.csv");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        if (code == 0) return kOk;
        out << Json{{"error", "parse-error"}, {"message", e.what()}}.dump() << "\n";
        return kParseError;
    }
    if (simulate->parsed() && opts.format == "json" && !simulate->count("--format")) {
        opts.format = "csv";
    }

    try {
        if (plan->parsed()) return cmd_plan(opts, out);
        if (validate->parsed()) return cmd_validate(opts, out);
        if (oracle->parsed()) return cmd_oracle(opts, out);
        return cmd_simulate(opts, out);
    } catch (const Error& e) {
        err << "backnet: " << e.what() << "\n";
        out << Json{{"error", e.kind()}, {"message", e.what()}}.dump() << "\n";
        return exit_code_for(e);
    }
}

}  // namespace backnet::cli

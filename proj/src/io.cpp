#include "backnet/io.hpp"

#include <fstream>
#include <sstream>

#include <fmt/format.h>

#include "backnet/errors.hpp"

namespace backnet {

namespace {

template <typename T>
T field(const Json& doc, const char* key) {
    if (!doc.contains(key)) {
        throw ParseError(fmt::format("missing field \"{}\"", key));
    }
    try {
        return doc.at(key).get<T>();
    } catch (const Json::exception& e) {
        throw ParseError(fmt::format("field \"{}\": {}", key, e.what()));
    }
}

template <typename T>
T field_or(const Json& doc, const char* key, T fallback) {
    return doc.contains(key) ? field<T>(doc, key) : fallback;
}

StationPair parse_pair(const Json& entry, std::size_t m) {
    if (!entry.is_array() || entry.size() != 2 || !entry[0].is_number_unsigned() ||
        !entry[1].is_number_unsigned()) {
        throw ParseError(fmt::format("link entry {} is not a pair of station ids", entry.dump()));
    }
    const auto i = entry[0].get<std::size_t>();
    const auto j = entry[1].get<std::size_t>();
    if (!(i < j)) {
        throw ParseError(fmt::format("link [{}, {}] must satisfy i < j", i, j));
    }
    if (j >= m) {
        throw ParseError(fmt::format("link [{}, {}] references a station outside 0..{}", i, j,
                                     m == 0 ? 0 : m - 1));
    }
    return {i, j};
}

}  // namespace

LinkModels models_from_json(const Json& doc) {
    if (!doc.is_object()) {
        throw ParseError("\"models\" must be an object");
    }
    LinkModels models;
    models.of_cost_per_meter = field_or(doc, "of_cost_per_m", models.of_cost_per_meter);
    models.hybrid_cost_flat = field_or(doc, "hybrid_cost", models.hybrid_cost_flat);
    models.reliability_threshold_m = field_or(doc, "d_R_m", models.reliability_threshold_m);
    models.rate_threshold_m = field_or(doc, "d_D_m", models.rate_threshold_m);
    models.reliability_decay_m = field_or(doc, "lambda_R_m", models.reliability_decay_m);
    models.rate_decay_m = field_or(doc, "lambda_D_m", models.rate_decay_m);
    const auto plateau = field_or<std::string>(doc, "reliability_plateau", "alpha");
    if (plateau == "alpha") {
        models.plateau = ReliabilityPlateau::alpha;
    } else if (plateau == "one") {
        models.plateau = ReliabilityPlateau::one;
    } else {
        throw ParseError(fmt::format("reliability_plateau must be \"alpha\" or \"one\", got \"{}\"",
                                     plateau));
    }
    return models;
}

Json models_to_json(const LinkModels& models) {
    return Json{{"of_cost_per_m", models.of_cost_per_meter},
                {"hybrid_cost", models.hybrid_cost_flat},
                {"d_R_m", models.reliability_threshold_m},
                {"d_D_m", models.rate_threshold_m},
                {"lambda_R_m", models.reliability_decay_m},
                {"lambda_D_m", models.rate_decay_m},
                {"reliability_plateau",
                 models.plateau == ReliabilityPlateau::alpha ? "alpha" : "one"}};
}

ProblemInstance instance_from_json(const Json& doc) {
    if (!doc.is_object()) {
        throw ParseError("instance document must be a JSON object");
    }
    const Json& stations_doc = doc.contains("stations") ? doc.at("stations") : Json();
    if (!stations_doc.is_array()) {
        throw ParseError("\"stations\" must be an array");
    }
    std::vector<BaseStation> stations;
    for (const auto& s : stations_doc) {
        if (!s.is_object()) {
            throw ParseError("each station must be an object {id, x_m, y_m}");
        }
        stations.push_back(
            {field<std::size_t>(s, "id"), {field<double>(s, "x_m"), field<double>(s, "y_m")}});
    }

    ProblemInstance problem;
    try {
        problem.topology = Topology(std::move(stations));
    } catch (const InvalidInput& e) {
        throw ParseError(e.what());
    }
    problem.k = field<int>(doc, "K");
    problem.alpha = field<double>(doc, "alpha");
    problem.target_rate = field<double>(doc, "D_t");
    if (doc.contains("models")) {
        problem.models = models_from_json(doc.at("models"));
    }
    try {
        problem.validate();
    } catch (const InvalidInput& e) {
        throw ParseError(e.what());
    }
    return problem;
}

Json instance_to_json(const ProblemInstance& problem) {
    Json stations = Json::array();
    for (const auto& s : problem.topology.stations()) {
        stations.push_back({{"id", s.id}, {"x_m", s.position.x_m}, {"y_m", s.position.y_m}});
    }
    return Json{{"stations", stations},
                {"K", problem.k},
                {"alpha", problem.alpha},
                {"D_t", problem.target_rate},
                {"models", models_to_json(problem.models)}};
}

Plan plan_from_json(const Json& doc, std::size_t station_count) {
    if (!doc.is_object()) {
        throw ParseError("plan document must be a JSON object");
    }
    SquareMatrix<std::uint8_t> x(station_count, 0);
    SquareMatrix<std::uint8_t> y(station_count, 0);
    const auto load = [&](const char* key, SquareMatrix<std::uint8_t>& target) {
        if (!doc.contains(key)) return;
        const Json& links = doc.at(key);
        if (!links.is_array()) {
            throw ParseError(fmt::format("\"{}\" must be an array of pairs", key));
        }
        for (const auto& entry : links) {
            const auto [i, j] = parse_pair(entry, station_count);
            target(i, j) = target(j, i) = 1;
        }
    };
    load("of_links", x);
    load("hybrid_links", y);
    return Plan::from_matrices(std::move(x), std::move(y));
}

Json plan_to_json(const Plan& plan) {
    const auto pairs = [](const std::vector<StationPair>& links) {
        Json out = Json::array();
        for (const auto& [i, j] : links) out.push_back({i, j});
        return out;
    };
    return Json{{"of_links", pairs(plan.of_links())}, {"hybrid_links", pairs(plan.hybrid_links())}};
}

Json report_to_json(const FeasibilityReport& report) {
    Json violations = Json::array();
    for (const auto& [i, j] : report.exclusivity_violations) violations.push_back({i, j});
    return Json{
        {"overall", report.overall},
        {"C1_exclusivity", {{"pass", report.exclusivity_ok}, {"violations", violations}}},
        {"C2_connectivity",
         {{"pass", report.connectivity_ok}, {"min_path_diversity", report.min_path_diversity}}},
        {"C3_reliability",
         {{"pass", report.reliability_ok}, {"node_reliability", report.node_reliability}}},
        {"C4_rate", {{"pass", report.rate_ok}, {"node_rate", report.node_rate}}},
    };
}

Json read_json_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw ParseError(fmt::format("cannot open {}", path.string()));
    }
    try {
        return Json::parse(in);
    } catch (const Json::parse_error& e) {
        throw ParseError(fmt::format("{}: {}", path.string(), e.what()));
    }
}

ProblemInstance load_instance(const std::filesystem::path& path) {
    return instance_from_json(read_json_file(path));
}

}  // namespace backnet

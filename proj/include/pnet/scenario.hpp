#pragma once

// Scenario files bundle everything one evaluation needs: the network, the
// ruleset, the attacker's start/goal/weights and optional degradation,
// similarity and constraint settings.

#include "pnet/degrade.hpp"
#include "pnet/planner.hpp"
#include "pnet/similarity.hpp"

#include <filesystem>
#include <optional>
#include <string>

namespace pnet {

struct Constraints {
    std::optional<int> proactive_budget;
    std::optional<double> proactive_time_cap;
    std::optional<double> reaction_time_cap;
};

struct AttackerSpec {
    std::string start;
    Goal goal;
    GoodnessWeights weights;
};

struct Scenario {
    Network network;
    RuleSet ruleset;
    AttackerSpec attacker;
    std::optional<DegradationSpec> degradation;
    std::optional<SimilarityConfig> similarity;
    std::optional<Constraints> constraints;
};

// Parses and fully validates; the attacker's start container gets its
// `compromised` fact set true. Failures throw ScenarioError with a
// field-precise location.
Scenario load_scenario(const std::filesystem::path& path);
Scenario parse_scenario(const std::string& json_text, const std::string& source_name);

// Canonical JSON text (UTF-8, newline-terminated). load(save(s)) == s.
std::string save_scenario(const Scenario& scenario);
void save_scenario_file(const Scenario& scenario, const std::filesystem::path& path);

}  // namespace pnet

#pragma once

// JSON encodings for paths, reports, logs and defense actions. All emitted
// documents are deterministic: fixed field order, no timestamps.

#include "pnet/degrade.hpp"
#include "pnet/harness.hpp"
#include "pnet/planner.hpp"
#include "pnet/similarity.hpp"

#include <json.hpp>

#include <string>

namespace pnet {

using Json = nlohmann::ordered_json;

Json value_to_json(const FactValue& value);
FactValue value_from_json(const Json& j, const std::string& where);

Json target_to_json(const FactTarget& target);
FactTarget target_from_json(const Json& j, const std::string& where);

Json delta_to_json(const FactDelta& delta);
FactDelta delta_from_json(const Json& j, const std::string& where);

Json path_to_json(const AttackPath& path);
AttackPath path_from_json(const Json& j, const std::string& where);
std::vector<AttackPath> paths_from_json(const Json& j, const std::string& where);

Json similarity_report_to_json(const SimilarityReport& report);

Json degradation_log_to_json(const DegradationLog& log);
DegradationLog degradation_log_from_json(const Json& j, const std::string& where);

Json defense_action_to_json(const DefenseAction& action);
DefenseAction defense_action_from_json(const Json& j, const std::string& where);
std::vector<DefenseAction> defense_actions_from_json(const Json& j, const std::string& where);

Json offensive_report_to_json(const OffensiveEvalReport& report);
Json defensive_report_to_json(const DefensiveEvalReport& report);

Json plan_result_to_json(const PlanResult& result);

// Canonical text form: two-space indent, trailing newline.
std::string dump_json(const Json& j);

// Parse with filename-tagged diagnostics (throws ScenarioError).
Json parse_json_text(const std::string& text, const std::string& source_name);
Json load_json_file(const std::filesystem::path& path);

}  // namespace pnet

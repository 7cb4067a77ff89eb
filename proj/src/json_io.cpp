#include "pnet/json_io.hpp"

#include "pnet/error.hpp"

#include <fstream>
#include <sstream>

namespace pnet {

namespace {

[[noreturn]] void fail(const std::string& where, const std::string& what) {
    throw ScenarioError(where + ": " + what);
}

const Json& require(const Json& j, const char* field, const std::string& where) {
    if (!j.is_object()) fail(where, "expected an object");
    auto it = j.find(field);
    if (it == j.end()) fail(where, std::string("missing required field '") + field + "'");
    return *it;
}

std::string require_string(const Json& j, const char* field, const std::string& where) {
    const Json& v = require(j, field, where);
    if (!v.is_string()) fail(where + "." + field, "expected a string");
    return v.get<std::string>();
}

}  // namespace

Json value_to_json(const FactValue& value) {
    switch (value.index()) {
        case 0: return std::get<bool>(value);
        case 1: return std::get<std::int64_t>(value);
        case 2: return std::get<double>(value);
        default: return std::get<std::string>(value);
    }
}

FactValue value_from_json(const Json& j, const std::string& where) {
    if (j.is_boolean()) return j.get<bool>();
    if (j.is_number_integer() || j.is_number_unsigned()) return j.get<std::int64_t>();
    if (j.is_number_float()) return j.get<double>();
    if (j.is_string()) return j.get<std::string>();
    fail(where, "fact values must be boolean, integer, real or text");
}

Json target_to_json(const FactTarget& target) {
    Json j;
    switch (target.kind) {
        case TargetKind::container:
            j["kind"] = "container";
            j["id"] = target.id;
            break;
        case TargetKind::link:
            j["kind"] = "link";
            j["id"] = target.id;
            break;
        case TargetKind::global:
            j["kind"] = "global";
            break;
    }
    return j;
}

FactTarget target_from_json(const Json& j, const std::string& where) {
    std::string kind = require_string(j, "kind", where);
    if (kind == "global") return FactTarget::global();
    std::string id = require_string(j, "id", where);
    if (kind == "container") return FactTarget::container(id);
    if (kind == "link") return FactTarget::link(id);
    fail(where + ".kind", "expected container, link or global");
}

Json delta_to_json(const FactDelta& delta) {
    Json j;
    j["target"] = target_to_json(delta.target);
    j["key"] = delta.key;
    j["old_value"] = delta.old_value ? value_to_json(*delta.old_value) : Json(nullptr);
    j["new_value"] = delta.new_value ? value_to_json(*delta.new_value) : Json(nullptr);
    return j;
}

FactDelta delta_from_json(const Json& j, const std::string& where) {
    FactDelta d;
    d.target = target_from_json(require(j, "target", where), where + ".target");
    d.key = require_string(j, "key", where);
    const Json& oldv = require(j, "old_value", where);
    if (!oldv.is_null()) d.old_value = value_from_json(oldv, where + ".old_value");
    const Json& newv = require(j, "new_value", where);
    if (!newv.is_null()) d.new_value = value_from_json(newv, where + ".new_value");
    if (!d.old_value && !d.new_value) fail(where, "delta needs an old_value or a new_value");
    return d;
}

Json path_to_json(const AttackPath& path) {
    Json j;
    j["start"] = path.start;
    Json steps = Json::array();
    for (const auto& s : path.steps) {
        Json step;
        step["origin"] = s.origin;
        step["link"] = s.link;
        step["dest"] = s.dest;
        step["rule"] = s.rule;
        steps.push_back(std::move(step));
    }
    j["steps"] = std::move(steps);
    return j;
}

AttackPath path_from_json(const Json& j, const std::string& where) {
    AttackPath path;
    path.start = require_string(j, "start", where);
    const Json& steps = require(j, "steps", where);
    if (!steps.is_array()) fail(where + ".steps", "expected an array");
    for (std::size_t i = 0; i < steps.size(); ++i) {
        std::string at = where + ".steps[" + std::to_string(i) + "]";
        const Json& s = steps[i];
        path.steps.push_back({require_string(s, "origin", at), require_string(s, "link", at),
                              require_string(s, "dest", at), require_string(s, "rule", at)});
    }
    return path;
}

std::vector<AttackPath> paths_from_json(const Json& j, const std::string& where) {
    std::vector<AttackPath> paths;
    if (j.is_object()) {
        paths.push_back(path_from_json(j, where));
        return paths;
    }
    if (!j.is_array()) fail(where, "expected a path object or an array of paths");
    for (std::size_t i = 0; i < j.size(); ++i) {
        paths.push_back(path_from_json(j[i], where + "[" + std::to_string(i) + "]"));
    }
    return paths;
}

Json similarity_report_to_json(const SimilarityReport& report) {
    Json j;
    j["node_jaccard"] = report.node_jaccard;
    j["link_jaccard"] = report.link_jaccard;
    j["structural"] = report.structural;
    j["sequence_sim"] = report.sequence_sim;
    j["technique_sim"] = report.technique_sim;
    j["overall"] = report.overall;
    j["prefiltered"] = report.prefiltered;
    return j;
}

Json degradation_log_to_json(const DegradationLog& log) {
    Json j;
    j["hidden_links"] = log.hidden_links;
    Json perturbed = Json::array();
    for (const auto& d : log.perturbed) perturbed.push_back(delta_to_json(d));
    j["perturbed"] = std::move(perturbed);
    Json spurious = Json::array();
    for (const auto& s : log.spurious) {
        Json f;
        f["target"] = target_to_json(s.target);
        f["key"] = s.key;
        f["value"] = value_to_json(s.value);
        spurious.push_back(std::move(f));
    }
    j["spurious"] = std::move(spurious);
    return j;
}

DegradationLog degradation_log_from_json(const Json& j, const std::string& where) {
    DegradationLog log;
    const Json& hidden = require(j, "hidden_links", where);
    if (!hidden.is_array()) fail(where + ".hidden_links", "expected an array");
    for (const auto& h : hidden) {
        if (!h.is_string()) fail(where + ".hidden_links", "expected link id strings");
        log.hidden_links.push_back(h.get<std::string>());
    }
    const Json& perturbed = require(j, "perturbed", where);
    if (!perturbed.is_array()) fail(where + ".perturbed", "expected an array");
    for (std::size_t i = 0; i < perturbed.size(); ++i) {
        log.perturbed.push_back(
            delta_from_json(perturbed[i], where + ".perturbed[" + std::to_string(i) + "]"));
    }
    const Json& spurious = require(j, "spurious", where);
    if (!spurious.is_array()) fail(where + ".spurious", "expected an array");
    for (std::size_t i = 0; i < spurious.size(); ++i) {
        std::string at = where + ".spurious[" + std::to_string(i) + "]";
        const Json& s = spurious[i];
        log.spurious.push_back({target_from_json(require(s, "target", at), at + ".target"),
                                require_string(s, "key", at),
                                value_from_json(require(s, "value", at), at + ".value")});
    }
    return log;
}

Json defense_action_to_json(const DefenseAction& action) {
    Json j;
    j["kind"] = action_kind_name(action.kind);
    switch (action.kind) {
        case ActionKind::patch_fact:
            j["container"] = action.container;
            j["key"] = action.key;
            j["value"] = value_to_json(action.value);
            break;
        case ActionKind::disable_link:
            j["link"] = action.link;
            break;
        case ActionKind::quarantine_container:
        case ActionKind::monitor:
            j["container"] = action.container;
            break;
    }
    j["time_cost"] = action.time_cost;
    return j;
}

DefenseAction defense_action_from_json(const Json& j, const std::string& where) {
    DefenseAction action;
    std::string kind = require_string(j, "kind", where);
    auto parsed = action_kind_from_name(kind);
    if (!parsed) fail(where + ".kind", "unknown action kind '" + kind + "'");
    action.kind = *parsed;
    switch (action.kind) {
        case ActionKind::patch_fact:
            action.container = require_string(j, "container", where);
            action.key = require_string(j, "key", where);
            action.value = value_from_json(require(j, "value", where), where + ".value");
            break;
        case ActionKind::disable_link:
            action.link = require_string(j, "link", where);
            break;
        case ActionKind::quarantine_container:
        case ActionKind::monitor:
            action.container = require_string(j, "container", where);
            break;
    }
    if (auto it = j.find("time_cost"); it != j.end()) {
        if (!it->is_number()) fail(where + ".time_cost", "expected a number");
        action.time_cost = it->get<double>();
        if (action.time_cost < 0.0) fail(where + ".time_cost", "must be >= 0");
    }
    return action;
}

std::vector<DefenseAction> defense_actions_from_json(const Json& j, const std::string& where) {
    if (!j.is_array()) fail(where, "expected an array of actions");
    std::vector<DefenseAction> actions;
    for (std::size_t i = 0; i < j.size(); ++i) {
        actions.push_back(defense_action_from_json(j[i], where + "[" + std::to_string(i) + "]"));
    }
    return actions;
}

Json offensive_report_to_json(const OffensiveEvalReport& report) {
    Json j;
    j["sut_identity"] = report.sut_identity;
    j["perfect_path"] = path_to_json(report.perfect_path);
    j["sut_path"] = path_to_json(report.sut_path);
    j["similarity"] = similarity_report_to_json(report.similarity);
    j["sut_violations"] = report.sut_violations;
    if (report.degradation_log) {
        j["degradation_log"] = degradation_log_to_json(*report.degradation_log);
    }
    if (!report.timestep_reports.empty()) {
        Json reports = Json::array();
        for (const auto& r : report.timestep_reports) {
            reports.push_back(similarity_report_to_json(r));
        }
        j["timestep_reports"] = std::move(reports);
    }
    if (report.mean_overall) j["mean_overall"] = *report.mean_overall;
    return j;
}

namespace {

Json applied_to_json(const AppliedAction& a) {
    Json j;
    j["phase"] = a.phase;
    if (a.iteration >= 0) j["iteration"] = a.iteration;
    j["action"] = defense_action_to_json(a.action);
    return j;
}

Json dropped_to_json(const DroppedAction& a) {
    Json j;
    j["phase"] = a.phase;
    if (a.iteration >= 0) j["iteration"] = a.iteration;
    j["action"] = defense_action_to_json(a.action);
    j["reason"] = a.reason;
    return j;
}

}  // namespace

Json defensive_report_to_json(const DefensiveEvalReport& report) {
    Json j;
    j["goal_reached"] = report.goal_reached;
    j["iterations_run"] = report.iterations_run;
    j["steps_blocked"] = report.steps_blocked;
    j["steps_succeeded"] = report.steps_succeeded;
    j["first_detection_iteration"] = report.first_detection_iteration
                                         ? Json(*report.first_detection_iteration)
                                         : Json(nullptr);
    j["score"] = report.score;
    Json applied = Json::array();
    for (const auto& a : report.actions_applied) applied.push_back(applied_to_json(a));
    j["actions_applied"] = std::move(applied);
    Json dropped = Json::array();
    for (const auto& a : report.actions_dropped) dropped.push_back(dropped_to_json(a));
    j["actions_dropped"] = std::move(dropped);
    return j;
}

Json plan_result_to_json(const PlanResult& result) {
    if (!result.path) return Json(nullptr);
    return path_to_json(*result.path);
}

std::string dump_json(const Json& j) {
    return j.dump(2) + "\n";
}

Json parse_json_text(const std::string& text, const std::string& source_name) {
    try {
        return Json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ScenarioError(source_name + ": " + e.what());
    }
}

Json load_json_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ScenarioError(path.string() + ": cannot open file");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_json_text(buf.str(), path.string());
}

}  // namespace pnet

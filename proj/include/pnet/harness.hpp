#pragma once

// Evaluation orchestration. Offensive runs score a system under test
// against the reference attacker by path similarity; defensive runs put a
// defender into an arbiter-mediated attack loop and score prevention,
// blocking and detection.

#include "pnet/degrade.hpp"
#include "pnet/scenario.hpp"
#include "pnet/similarity.hpp"

#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace pnet {

// Behavioral contract for an offensive decision-making tool under test.
// The returned path must be valid against the view the adapter was given,
// which is not necessarily ground truth.
struct SutAdapter {
    std::string identity;
    std::function<AttackPath(const Network& view, const RuleSet& ruleset, const std::string& start,
                             const Goal& goal)>
        plan_fn;
};

enum class ActionKind { patch_fact, disable_link, quarantine_container, monitor };

const char* action_kind_name(ActionKind k);
std::optional<ActionKind> action_kind_from_name(std::string_view name);

struct DefenseAction {
    ActionKind kind = ActionKind::monitor;
    std::string container;  // patch_fact / quarantine_container / monitor
    std::string link;       // disable_link
    std::string key;        // patch_fact
    FactValue value;        // patch_fact
    double time_cost = 0.0;
};

// What the defender observes. source_step_index is arbiter bookkeeping and
// is stripped (-1) before delivery.
struct Symptom {
    std::string indicator;
    std::string location;  // container id
    int source_step_index = -1;
    double visibility = 0.0;
};

struct DefenderAdapter {
    std::string identity;
    std::function<std::vector<DefenseAction>(const Network& view, const Constraints&)> proactive_fn;
    std::function<std::vector<DefenseAction>(const std::vector<Symptom>&, const Constraints&)>
        react_fn;
};

struct OffensiveEvalReport {
    AttackPath perfect_path;
    AttackPath sut_path;
    SimilarityReport similarity;
    std::string sut_identity;
    std::vector<std::string> sut_violations;  // path invalid against the SUT's own view
    std::optional<DegradationLog> degradation_log;
    std::vector<SimilarityReport> timestep_reports;  // filled by the timestep pipeline
    std::optional<double> mean_overall;
};

struct AppliedAction {
    std::string phase;  // "proactive" or "reaction"
    int iteration = -1; // 0-based; -1 during the proactive phase
    DefenseAction action;
};

struct DroppedAction {
    std::string phase;
    int iteration = -1;
    DefenseAction action;
    std::string reason;
};

struct DefensiveEvalReport {
    bool goal_reached = false;
    int iterations_run = 0;
    int steps_blocked = 0;
    int steps_succeeded = 0;
    std::optional<int> first_detection_iteration;  // 0-based iteration index
    std::vector<AppliedAction> actions_applied;
    std::vector<DroppedAction> actions_dropped;
    double score = 0.0;
};

// Ground truth plus observation state; only the arbiter mutates truth
// during a defensive run.
struct ArbiterState {
    Network truth;
    std::map<std::string, double> monitor_levels;  // absent containers sit at 0.5
    int iteration = 0;
    std::set<std::string> quarantined;

    double monitor_level(const std::string& container) const;
};

enum class StepOutcome { blocked, succeeded };

struct StepResolution {
    StepOutcome outcome = StepOutcome::blocked;
    std::vector<Symptom> symptoms;
    std::string detail;  // why a step was blocked, for reports
};

// Runs the defender's proactive actions against truth under the budget and
// time-cap constraints; over-limit actions are dropped in order. Actions
// naming unknown entities are dropped with a reason and the run continues.
std::pair<std::vector<AppliedAction>, std::vector<DroppedAction>> run_proactive(
    ArbiterState& arbiter, const DefenderAdapter& defender, const Network& view,
    const Constraints& constraints);

// Resolves one attack step on truth: it succeeds iff the rule is applicable
// there, the link still exists and neither endpoint is quarantined.
// Successful steps apply their postconditions; symptoms are emitted when
// visibility >= 1 - monitor_level (half visibility for blocked steps).
StepResolution arbiter_resolve_step(ArbiterState& arbiter, const AttackStep& step,
                                    const RuleSet& ruleset);

enum class ModelUpdates { none, post_proactive, every_iteration };

const char* model_updates_name(ModelUpdates m);
std::optional<ModelUpdates> model_updates_from_name(std::string_view name);

OffensiveEvalReport eval_offense(const Scenario& scenario, const SutAdapter& sut,
                                 const std::optional<DegradationSpec>& degradation,
                                 const SimilarityConfig& sim_config,
                                 const SearchLimits& limits = {});

// Applies each update batch to both the truth and the SUT view, replans
// both sides from the current state and aggregates the per-timestep
// comparisons.
OffensiveEvalReport eval_offense_timesteps(const Scenario& scenario, const SutAdapter& sut,
                                           const std::vector<std::vector<FactDelta>>& updates,
                                           const SimilarityConfig& sim_config,
                                           const SearchLimits& limits = {});

DefensiveEvalReport eval_defense(const Scenario& scenario, const GoodnessWeights& attacker_weights,
                                 const DefenderAdapter& defender, const Constraints& constraints,
                                 const std::optional<DegradationSpec>& attacker_degradation,
                                 ModelUpdates updates, int max_iterations,
                                 const SearchLimits& limits = {});

// Reference players.
SutAdapter sut_greedy();
SutAdapter sut_random(std::uint64_t seed);
SutAdapter sut_weighted(const GoodnessWeights& weights, const SearchLimits& limits = {});
DefenderAdapter defender_noop();
DefenderAdapter defender_scripted(std::vector<DefenseAction> actions);
DefenderAdapter defender_threshold(int k);

}  // namespace pnet

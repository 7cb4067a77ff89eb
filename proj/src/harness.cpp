#include "pnet/harness.hpp"

#include "pnet/error.hpp"

#include <algorithm>
#include <cstdio>
#include <memory>

namespace pnet {

const char* action_kind_name(ActionKind k) {
    switch (k) {
        case ActionKind::patch_fact: return "patch_fact";
        case ActionKind::disable_link: return "disable_link";
        case ActionKind::quarantine_container: return "quarantine_container";
        case ActionKind::monitor: return "monitor";
    }
    return "?";
}

std::optional<ActionKind> action_kind_from_name(std::string_view name) {
    if (name == "patch_fact") return ActionKind::patch_fact;
    if (name == "disable_link") return ActionKind::disable_link;
    if (name == "quarantine_container") return ActionKind::quarantine_container;
    if (name == "monitor") return ActionKind::monitor;
    return std::nullopt;
}

const char* model_updates_name(ModelUpdates m) {
    switch (m) {
        case ModelUpdates::none: return "none";
        case ModelUpdates::post_proactive: return "post-proactive";
        case ModelUpdates::every_iteration: return "every-iteration";
    }
    return "?";
}

std::optional<ModelUpdates> model_updates_from_name(std::string_view name) {
    if (name == "none") return ModelUpdates::none;
    if (name == "post-proactive") return ModelUpdates::post_proactive;
    if (name == "every-iteration") return ModelUpdates::every_iteration;
    return std::nullopt;
}

double ArbiterState::monitor_level(const std::string& container) const {
    auto it = monitor_levels.find(container);
    return it == monitor_levels.end() ? 0.5 : it->second;
}

// ---------------------------------------------------------------------------
// offensive pipeline

namespace {

// Replays a SUT path against the view it was planned on; the first breach
// of the path contract is reported.
std::vector<std::string> validate_sut_path(const AttackPath& path, const Network& view,
                                           const RuleSet& ruleset) {
    std::vector<std::string> violations;
    if (path.steps.empty()) return violations;
    if (path.steps.front().origin != path.start) {
        violations.push_back("step 0 origin '" + path.steps.front().origin +
                             "' does not match path start '" + path.start + "'");
        return violations;
    }
    Network state = view;
    for (std::size_t i = 0; i < path.steps.size(); ++i) {
        const AttackStep& step = path.steps[i];
        std::string at = "step " + std::to_string(i);
        auto c = state.containers.find(step.origin);
        if (c == state.containers.end()) {
            violations.push_back(at + ": unknown origin '" + step.origin + "'");
            return violations;
        }
        const Fact* foothold = c->second.facts.find("compromised");
        bool compromised = foothold && value_kind(foothold->value) == ValueKind::boolean &&
                           std::get<bool>(foothold->value);
        if (!compromised) {
            violations.push_back(at + ": origin '" + step.origin + "' is not compromised");
            return violations;
        }
        const Rule* rule = ruleset.find(step.rule);
        if (!rule) {
            violations.push_back(at + ": unknown rule '" + step.rule + "'");
            return violations;
        }
        try {
            Applicability ok = check_applicable(*rule, state, step.origin, step.link, step.dest);
            if (!ok) {
                violations.push_back(at + ": rule '" + step.rule + "' fails " +
                                     ok.failing_predicate);
                return violations;
            }
            state = apply_rule(*rule, state, step.origin, step.link, step.dest).network;
        } catch (const Error& e) {
            violations.push_back(at + ": " + e.what());
            return violations;
        }
    }
    return violations;
}

}  // namespace

OffensiveEvalReport eval_offense(const Scenario& scenario, const SutAdapter& sut,
                                 const std::optional<DegradationSpec>& degradation,
                                 const SimilarityConfig& sim_config, const SearchLimits& limits) {
    OffensiveEvalReport report;
    report.sut_identity = sut.identity;

    PlanResult perfect = plan(scenario.network, scenario.ruleset, scenario.attacker.start,
                              scenario.attacker.goal, scenario.attacker.weights, limits);
    report.perfect_path = perfect.path.value_or(AttackPath{scenario.attacker.start, {}});

    Network view = scenario.network;
    if (degradation) {
        Degraded d = degrade_network(scenario.network, *degradation);
        view = std::move(d.network);
        report.degradation_log = std::move(d.log);
    }
    report.sut_path = sut.plan_fn(view, scenario.ruleset, scenario.attacker.start,
                                  scenario.attacker.goal);
    report.sut_violations = validate_sut_path(report.sut_path, view, scenario.ruleset);
    report.similarity =
        compare_paths(report.perfect_path, report.sut_path, sim_config, &scenario.ruleset);
    return report;
}

OffensiveEvalReport eval_offense_timesteps(const Scenario& scenario, const SutAdapter& sut,
                                           const std::vector<std::vector<FactDelta>>& updates,
                                           const SimilarityConfig& sim_config,
                                           const SearchLimits& limits) {
    OffensiveEvalReport report;
    report.sut_identity = sut.identity;

    Network truth = scenario.network;
    Network view = truth;  // timestep runs feed both sides the same updates

    std::vector<std::pair<AttackPath, AttackPath>> pairs;
    for (std::size_t t = 0; t <= updates.size(); ++t) {
        if (t > 0) {
            try {
                truth = apply_deltas(truth, updates[t - 1]);
                view = apply_deltas(view, updates[t - 1]);
            } catch (const Error& e) {
                throw Error("timestep " + std::to_string(t) + ": " + e.what());
            }
        }
        std::vector<std::string> footholds = compromised_containers(truth);
        PlanResult perfect =
            footholds.empty()
                ? PlanResult{}
                : plan_from_footholds(truth, scenario.ruleset, footholds, scenario.attacker.goal,
                                      scenario.attacker.weights, limits);
        AttackPath perfect_path = perfect.path.value_or(AttackPath{scenario.attacker.start, {}});
        AttackPath sut_path =
            sut.plan_fn(view, scenario.ruleset, scenario.attacker.start, scenario.attacker.goal);
        if (t == 0) {
            report.perfect_path = perfect_path;
            report.sut_path = sut_path;
            report.sut_violations = validate_sut_path(sut_path, view, scenario.ruleset);
        }
        pairs.emplace_back(std::move(perfect_path), std::move(sut_path));
    }

    TraceReport trace = compare_traces(pairs, sim_config, &scenario.ruleset);
    report.similarity = trace.reports.front();
    report.timestep_reports = std::move(trace.reports);
    report.mean_overall = trace.mean_overall;
    return report;
}

// ---------------------------------------------------------------------------
// defensive loop

namespace {

// Applies one defense action to truth; returns a drop reason on failure.
std::optional<std::string> apply_action(ArbiterState& arbiter, const DefenseAction& action) {
    switch (action.kind) {
        case ActionKind::patch_fact: {
            auto it = arbiter.truth.containers.find(action.container);
            if (it == arbiter.truth.containers.end()) {
                return "unknown container '" + action.container + "'";
            }
            it->second.facts.set(action.key, action.value);
            return std::nullopt;
        }
        case ActionKind::disable_link:
            if (!arbiter.truth.links.erase(action.link)) {
                return "unknown link '" + action.link + "'";
            }
            return std::nullopt;
        case ActionKind::quarantine_container:
            if (!arbiter.truth.containers.count(action.container)) {
                return "unknown container '" + action.container + "'";
            }
            arbiter.quarantined.insert(action.container);
            return std::nullopt;
        case ActionKind::monitor: {
            if (!arbiter.truth.containers.count(action.container)) {
                return "unknown container '" + action.container + "'";
            }
            double level = arbiter.monitor_level(action.container);
            arbiter.monitor_levels[action.container] = std::min(1.0, level + 0.25);
            return std::nullopt;
        }
    }
    return "unknown action kind";
}

struct ActionBatch {
    std::vector<AppliedAction> applied;
    std::vector<DroppedAction> dropped;
};

// Budget/time-cap enforcement: actions run in order until a limit would be
// exceeded; from there the rest of the batch is dropped.
ActionBatch apply_actions(ArbiterState& arbiter, const std::vector<DefenseAction>& actions,
                          const char* phase, int iteration, std::optional<int> budget,
                          std::optional<double> time_cap) {
    ActionBatch batch;
    int used = 0;
    double spent = 0.0;
    bool capped = false;
    for (const auto& action : actions) {
        if (!capped && budget && used >= *budget) capped = true;
        if (!capped && time_cap && spent + action.time_cost > *time_cap) capped = true;
        if (capped) {
            batch.dropped.push_back({phase, iteration, action, "over constraint limit"});
            continue;
        }
        if (auto reason = apply_action(arbiter, action)) {
            batch.dropped.push_back({phase, iteration, action, *reason});
            continue;
        }
        ++used;
        spent += action.time_cost;
        batch.applied.push_back({phase, iteration, action});
    }
    return batch;
}

}  // namespace

std::pair<std::vector<AppliedAction>, std::vector<DroppedAction>> run_proactive(
    ArbiterState& arbiter, const DefenderAdapter& defender, const Network& view,
    const Constraints& constraints) {
    std::vector<DefenseAction> requested =
        defender.proactive_fn ? defender.proactive_fn(view, constraints)
                              : std::vector<DefenseAction>{};
    ActionBatch batch = apply_actions(arbiter, requested, "proactive", -1,
                                      constraints.proactive_budget, constraints.proactive_time_cap);
    return {std::move(batch.applied), std::move(batch.dropped)};
}

StepResolution arbiter_resolve_step(ArbiterState& arbiter, const AttackStep& step,
                                    const RuleSet& ruleset) {
    const Rule& rule = ruleset.at(step.rule);
    StepResolution res;

    bool succeeded = false;
    if (!arbiter.truth.links.count(step.link)) {
        res.detail = "link '" + step.link + "' no longer exists";
    } else if (arbiter.quarantined.count(step.origin)) {
        res.detail = "origin '" + step.origin + "' is quarantined";
    } else if (arbiter.quarantined.count(step.dest)) {
        res.detail = "destination '" + step.dest + "' is quarantined";
    } else {
        try {
            Applicability ok =
                check_applicable(rule, arbiter.truth, step.origin, step.link, step.dest);
            if (ok) {
                succeeded = true;
            } else {
                res.detail = "failed " + ok.failing_predicate;
            }
        } catch (const Error& e) {
            res.detail = e.what();
        }
    }

    if (succeeded) {
        arbiter.truth =
            apply_rule(rule, arbiter.truth, step.origin, step.link, step.dest).network;
    }
    res.outcome = succeeded ? StepOutcome::succeeded : StepOutcome::blocked;

    // failed attempts still make noise, at half strength
    double attenuation = succeeded ? 1.0 : 0.5;
    for (const auto& spec : rule.symptoms) {
        std::string location = spec.location == StepSide::origin ? step.origin : step.dest;
        double visibility = spec.visibility * attenuation;
        if (visibility >= 1.0 - arbiter.monitor_level(location)) {
            res.symptoms.push_back({spec.indicator, location, arbiter.iteration, visibility});
        }
    }
    return res;
}

// ---------------------------------------------------------------------------
// attacker drivers for eval_defense

namespace {

Network attacker_model(const Network& truth, const std::optional<DegradationSpec>& degradation) {
    if (!degradation) return truth;
    return degrade_network(truth, *degradation).network;
}

// The attacker's next move under the configured update mode. Pre-planned
// attackers walk a fixed path; adaptive ones replan on a refreshed model
// and give up when replanning repeats a step that was just blocked.
class AttackerDriver {
public:
    AttackerDriver(const Scenario& scenario, const GoodnessWeights& weights,
                   const std::optional<DegradationSpec>& degradation, ModelUpdates updates,
                   const SearchLimits& limits)
        : scenario_(scenario),
          weights_(weights),
          degradation_(degradation),
          updates_(updates),
          limits_(limits) {
        if (updates_ != ModelUpdates::every_iteration) {
            model_ = attacker_model(scenario.network, degradation_);
        }
    }

    void on_proactive_done(const Network& truth) {
        if (updates_ == ModelUpdates::post_proactive) {
            model_ = attacker_model(truth, degradation_);
        }
        if (updates_ != ModelUpdates::every_iteration) {
            PlanResult r = plan_on_model();
            if (r.path) preplanned_ = *r.path;
        }
    }

    std::optional<AttackStep> next_step(const Network& truth) {
        if (updates_ != ModelUpdates::every_iteration) {
            if (!preplanned_ || cursor_ >= preplanned_->steps.size()) return std::nullopt;
            return preplanned_->steps[cursor_++];
        }
        model_ = attacker_model(truth, degradation_);
        PlanResult r = plan_on_model();
        if (!r.path || r.path->steps.empty()) return std::nullopt;
        AttackStep step = r.path->steps.front();
        if (last_blocked_ && step == *last_blocked_) return std::nullopt;  // futile retry
        return step;
    }

    void on_outcome(const AttackStep& step, StepOutcome outcome) {
        last_blocked_ = outcome == StepOutcome::blocked ? std::optional<AttackStep>(step)
                                                        : std::nullopt;
    }

private:
    PlanResult plan_on_model() {
        std::vector<std::string> footholds = compromised_containers(model_);
        if (footholds.empty()) return {};
        return plan_from_footholds(model_, scenario_.ruleset, footholds, scenario_.attacker.goal,
                                   weights_, limits_);
    }

    const Scenario& scenario_;
    GoodnessWeights weights_;
    std::optional<DegradationSpec> degradation_;
    ModelUpdates updates_;
    SearchLimits limits_;
    Network model_;
    std::optional<AttackPath> preplanned_;
    std::size_t cursor_ = 0;
    std::optional<AttackStep> last_blocked_;
};

}  // namespace

DefensiveEvalReport eval_defense(const Scenario& scenario, const GoodnessWeights& attacker_weights,
                                 const DefenderAdapter& defender, const Constraints& constraints,
                                 const std::optional<DegradationSpec>& attacker_degradation,
                                 ModelUpdates updates, int max_iterations,
                                 const SearchLimits& limits) {
    if (max_iterations < 1) throw ConfigError("max_iterations must be >= 1");
    DefensiveEvalReport report;

    ArbiterState arbiter;
    arbiter.truth = scenario.network;
    Network defender_view = scenario.network;  // the model network as known up front

    AttackerDriver attacker(scenario, attacker_weights, attacker_degradation, updates, limits);

    auto [applied, dropped] = run_proactive(arbiter, defender, defender_view, constraints);
    report.actions_applied = std::move(applied);
    report.actions_dropped = std::move(dropped);
    attacker.on_proactive_done(arbiter.truth);

    bool goal_now = goal_satisfied(arbiter.truth, scenario.attacker.goal);
    for (int iteration = 0; iteration < max_iterations && !goal_now; ++iteration) {
        arbiter.iteration = iteration;
        std::optional<AttackStep> step = attacker.next_step(arbiter.truth);
        if (!step) break;  // attacker has no applicable step

        StepResolution res = arbiter_resolve_step(arbiter, *step, scenario.ruleset);
        attacker.on_outcome(*step, res.outcome);
        ++report.iterations_run;
        if (res.outcome == StepOutcome::succeeded) {
            ++report.steps_succeeded;
        } else {
            ++report.steps_blocked;
        }

        if (!res.symptoms.empty() && !report.first_detection_iteration) {
            report.first_detection_iteration = iteration;
        }
        if (defender.react_fn) {
            std::vector<Symptom> delivered = res.symptoms;
            for (auto& s : delivered) s.source_step_index = -1;  // scoring detail stays inside
            std::vector<DefenseAction> reactions = defender.react_fn(delivered, constraints);
            ActionBatch batch = apply_actions(arbiter, reactions, "reaction", iteration,
                                              std::nullopt, constraints.reaction_time_cap);
            for (auto& a : batch.applied) report.actions_applied.push_back(std::move(a));
            for (auto& d : batch.dropped) report.actions_dropped.push_back(std::move(d));
        }
        goal_now = goal_satisfied(arbiter.truth, scenario.attacker.goal);
    }

    report.goal_reached = goal_now;
    int total_steps = report.steps_blocked + report.steps_succeeded;
    double block_fraction =
        total_steps > 0 ? static_cast<double>(report.steps_blocked) / total_steps
                        : (report.goal_reached ? 0.0 : 1.0);
    double detection = 0.0;
    if (report.first_detection_iteration) {
        detection = 1.0 - static_cast<double>(*report.first_detection_iteration) /
                              static_cast<double>(max_iterations);
    }
    report.score = 0.4 * (report.goal_reached ? 0.0 : 1.0) + 0.3 * block_fraction +
                   0.3 * detection;
    return report;
}

// ---------------------------------------------------------------------------
// reference players

namespace {

// Walks a chain from the view's first compromised container (or the given
// start), one move at a time, until the goal holds or nothing applies.
AttackPath walk_path(const Network& view, const RuleSet& ruleset, const std::string& start,
                     const Goal& goal, const std::function<std::size_t(std::size_t)>& pick) {
    std::vector<std::string> footholds = compromised_containers(view);
    std::string at = footholds.empty() ? start : footholds.front();
    if (!view.containers.count(at)) return {start, {}};

    AttackPath path{at, {}};
    Network state = view;
    std::set<std::string> visited_states;
    visited_states.insert(state_fingerprint(state) + "|" + at);
    constexpr int kMaxWalk = 64;
    for (int i = 0; i < kMaxWalk; ++i) {
        if (goal_satisfied(state, goal)) break;
        std::vector<Move> moves = applicable_moves(ruleset, state, at);
        if (moves.empty()) break;
        const Move& move = moves[pick(moves.size())];
        RuleApplication applied = apply_rule(ruleset.at(move.rule), state, at, move.link, move.dest);
        std::string key = state_fingerprint(applied.network) + "|" + move.dest;
        if (!visited_states.insert(key).second) break;  // walked into a loop
        path.steps.push_back({at, move.link, move.dest, move.rule});
        state = std::move(applied.network);
        at = move.dest;
    }
    return path;
}

}  // namespace

SutAdapter sut_greedy() {
    SutAdapter sut;
    sut.identity = "greedy";
    sut.plan_fn = [](const Network& view, const RuleSet& ruleset, const std::string& start,
                     const Goal& goal) {
        return walk_path(view, ruleset, start, goal, [](std::size_t) { return 0; });
    };
    return sut;
}

SutAdapter sut_random(std::uint64_t seed) {
    SutAdapter sut;
    sut.identity = "random:" + std::to_string(seed);
    sut.plan_fn = [seed](const Network& view, const RuleSet& ruleset, const std::string& start,
                         const Goal& goal) {
        // fresh engine per call so the adapter itself is stateless
        auto state = std::make_shared<std::uint64_t>(seed);
        auto pick = [state](std::size_t n) {
            // splitmix64 step; modulo keeps it platform-stable
            std::uint64_t z = (*state += 0x9e3779b97f4a7c15ULL);
            z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
            z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
            z = z ^ (z >> 31);
            return static_cast<std::size_t>(z % n);
        };
        return walk_path(view, ruleset, start, goal, pick);
    };
    return sut;
}

SutAdapter sut_weighted(const GoodnessWeights& weights, const SearchLimits& limits) {
    SutAdapter sut;
    char label[96];
    std::snprintf(label, sizeof label, "weighted:%g,%g,%g", weights.w_steps, weights.w_time,
                  weights.w_detection);
    sut.identity = label;
    sut.plan_fn = [weights, limits](const Network& view, const RuleSet& ruleset,
                                    const std::string& start, const Goal& goal) {
        std::vector<std::string> footholds = compromised_containers(view);
        if (footholds.empty()) return AttackPath{start, {}};
        PlanResult r = plan_from_footholds(view, ruleset, footholds, goal, weights, limits);
        return r.path.value_or(AttackPath{footholds.front(), {}});
    };
    return sut;
}

DefenderAdapter defender_noop() {
    DefenderAdapter d;
    d.identity = "noop";
    d.proactive_fn = [](const Network&, const Constraints&) {
        return std::vector<DefenseAction>{};
    };
    d.react_fn = [](const std::vector<Symptom>&, const Constraints&) {
        return std::vector<DefenseAction>{};
    };
    return d;
}

DefenderAdapter defender_scripted(std::vector<DefenseAction> actions) {
    DefenderAdapter d;
    d.identity = "scripted";
    d.proactive_fn = [actions = std::move(actions)](const Network&, const Constraints&) {
        return actions;
    };
    d.react_fn = [](const std::vector<Symptom>&, const Constraints&) {
        return std::vector<DefenseAction>{};
    };
    return d;
}

DefenderAdapter defender_threshold(int k) {
    if (k < 1) throw ConfigError("threshold defender needs k >= 1");
    DefenderAdapter d;
    d.identity = "threshold:" + std::to_string(k);
    auto seen = std::make_shared<std::set<std::pair<std::string, std::string>>>();
    d.proactive_fn = [](const Network&, const Constraints&) {
        return std::vector<DefenseAction>{};
    };
    d.react_fn = [k, seen](const std::vector<Symptom>& symptoms, const Constraints&) {
        std::vector<DefenseAction> actions;
        for (const auto& s : symptoms) {
            if (!seen->insert({s.indicator, s.location}).second) continue;
            if (static_cast<int>(seen->size()) == k) {
                DefenseAction action;
                action.kind = ActionKind::quarantine_container;
                action.container = s.location;
                action.time_cost = 1.0;
                actions.push_back(action);
            }
        }
        return actions;
    };
    return d;
}

}  // namespace pnet

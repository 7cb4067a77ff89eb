#pragma once

// The reference attacker: optimal path planning over weighted goodness
// metrics, plus the exhaustive enumerator used as the testing oracle.
//
// A path is a chain: each step starts where the previous one landed, and
// every step must be applicable in the state produced by replaying the
// postconditions so far.

#include "pnet/rules.hpp"

namespace pnet {

struct AttackStep {
    std::string origin;
    std::string link;
    std::string dest;
    std::string rule;

    friend bool operator==(const AttackStep&, const AttackStep&) = default;
};

struct AttackPath {
    std::string start;
    std::vector<AttackStep> steps;

    friend bool operator==(const AttackPath&, const AttackPath&) = default;
};

// Weighted objective: w_steps * |steps| + w_time * total time
// + w_detection * (1 - prod(1 - detectability)). Lower is better.
struct GoodnessWeights {
    double w_steps = 1.0;
    double w_time = 1.0;
    double w_detection = 1.0;
};

struct GoalPredicate {
    std::string container;
    Predicate predicate;
};

// Conjunction of container-fact predicates.
struct Goal {
    std::vector<GoalPredicate> predicates;
};

bool goal_satisfied(const Network& network, const Goal& goal);

struct SearchLimits {
    int max_depth = 8;
    long max_expansions = 1000000;
};

struct PlanResult {
    std::optional<AttackPath> path;
    double cost = 0.0;
    long expansions_used = 0;
    bool exhausted = false;  // expansion cap hit before the search settled
};

double path_cost(const AttackPath& path, const RuleSet& ruleset, const GoodnessWeights& weights);

// Depth-first enumeration of every goal-reaching chain of length
// <= max_depth from `start`. Branches stop at the first state satisfying
// the goal; (state, position) cycles along a branch are pruned. Output
// order is the DFS order induced by applicable_moves.
std::vector<AttackPath> enumerate_paths(const Network& network, const RuleSet& ruleset,
                                        const std::string& start, const Goal& goal, int max_depth);

// Minimal-cost goal-reaching chain within the limits; ties broken by
// shorter path, then lexicographic (rule, link, dest) sequence.
PlanResult plan(const Network& network, const RuleSet& ruleset, const std::string& start,
                const Goal& goal, const GoodnessWeights& weights, const SearchLimits& limits);

// Same contract as plan, but chains may begin at any container whose
// `compromised` fact is true in current_state. current_state must share
// the network's structure.
PlanResult replan_from(const Network& network, const RuleSet& ruleset, const Network& current_state,
                       const Goal& goal, const GoodnessWeights& weights, const SearchLimits& limits);

// Shared engine behind plan/replan_from: explicit candidate start set.
PlanResult plan_from_footholds(const Network& state, const RuleSet& ruleset,
                               const std::vector<std::string>& footholds, const Goal& goal,
                               const GoodnessWeights& weights, const SearchLimits& limits);

// Containers whose `compromised` fact is boolean true, sorted by id.
std::vector<std::string> compromised_containers(const Network& state);

}  // namespace pnet

#include "pnet/planner.hpp"

#include "pnet/error.hpp"

#include <algorithm>
#include <array>
#include <deque>
#include <map>
#include <queue>
#include <vector>

namespace pnet {

bool goal_satisfied(const Network& network, const Goal& goal) {
    for (const auto& gp : goal.predicates) {
        if (!network.containers.count(gp.container)) return false;
        if (!eval_predicate(network, FactTarget::container(gp.container), gp.predicate)) {
            return false;
        }
    }
    return true;
}

double path_cost(const AttackPath& path, const RuleSet& ruleset, const GoodnessWeights& weights) {
    double time = 0.0;
    double survival = 1.0;  // probability no step was detected
    for (const auto& step : path.steps) {
        const Rule& rule = ruleset.at(step.rule);
        time += rule.time_cost;
        survival *= 1.0 - rule.detectability;
    }
    return weights.w_steps * static_cast<double>(path.steps.size()) + weights.w_time * time +
           weights.w_detection * (1.0 - survival);
}

std::vector<std::string> compromised_containers(const Network& state) {
    std::vector<std::string> out;
    for (const auto& [id, c] : state.containers) {
        const Fact* f = c.facts.find("compromised");
        if (f && value_kind(f->value) == ValueKind::boolean && std::get<bool>(f->value)) {
            out.push_back(id);
        }
    }
    return out;
}

namespace {

struct EnumFrame {
    std::string fingerprint;
    std::string foothold;
};

void enumerate_rec(const Network& state, const RuleSet& ruleset, const std::string& foothold,
                   const Goal& goal, int remaining_depth, std::vector<EnumFrame>& branch,
                   AttackPath& partial, std::vector<AttackPath>& out) {
    if (remaining_depth <= 0) return;
    for (const Move& move : applicable_moves(ruleset, state, foothold)) {
        RuleApplication applied = apply_rule(ruleset.at(move.rule), state, foothold, move.link, move.dest);
        EnumFrame frame{state_fingerprint(applied.network), move.dest};
        bool cycle = false;
        for (const auto& seen : branch) {
            if (seen.foothold == frame.foothold && seen.fingerprint == frame.fingerprint) {
                cycle = true;
                break;
            }
        }
        if (cycle) continue;
        partial.steps.push_back({foothold, move.link, move.dest, move.rule});
        if (goal_satisfied(applied.network, goal)) {
            out.push_back(partial);
        } else {
            branch.push_back(std::move(frame));
            enumerate_rec(applied.network, ruleset, move.dest, goal, remaining_depth - 1, branch,
                          partial, out);
            branch.pop_back();
        }
        partial.steps.pop_back();
    }
}

}  // namespace

std::vector<AttackPath> enumerate_paths(const Network& network, const RuleSet& ruleset,
                                        const std::string& start, const Goal& goal, int max_depth) {
    if (!network.containers.count(start)) throw LookupError("unknown container '" + start + "'");
    std::vector<AttackPath> out;
    AttackPath partial{start, {}};
    if (goal_satisfied(network, goal)) {
        out.push_back(partial);  // already there; the empty chain reaches the goal
        return out;
    }
    std::vector<EnumFrame> branch;
    branch.push_back({state_fingerprint(network), start});
    enumerate_rec(network, ruleset, start, goal, max_depth, branch, partial, out);
    return out;
}

namespace {

// Search node for best-first planning. Nodes form a tree; parent pointers
// reconstruct the chain.
struct Node {
    Network state;
    std::string foothold;
    int depth = 0;
    double time = 0.0;
    double survival = 1.0;
    double cost = 0.0;
    const Node* parent = nullptr;
    AttackStep step;  // step that produced this node (unused at roots)
};

// Lexicographic (rule, link, dest) key of the chain leading to a node.
std::vector<std::array<std::string, 3>> sequence_key(const Node* node) {
    std::vector<std::array<std::string, 3>> seq;
    for (const Node* n = node; n && n->parent; n = n->parent) {
        seq.push_back({n->step.rule, n->step.link, n->step.dest});
    }
    std::reverse(seq.begin(), seq.end());
    return seq;
}

struct QueueEntry {
    double cost;
    int depth;
    std::vector<std::array<std::string, 3>> seq;
    const Node* node;

    bool operator>(const QueueEntry& o) const {
        if (cost != o.cost) return cost > o.cost;
        if (depth != o.depth) return depth > o.depth;
        if (seq != o.seq) return seq > o.seq;
        // equal sequences can only be the per-foothold roots
        return node->foothold > o.node->foothold;
    }
};

// Pareto record kept per (state fingerprint, foothold): a new node is
// pruned only when some recorded node is at least as good on every cost
// component and not lexicographically later. Plain duplicate-state pruning
// is unsound here because the detection term is multiplicative, so two
// routes to one state can rank differently after the same suffix.
struct ParetoEntry {
    int depth;
    double time;
    double survival;
    std::vector<std::array<std::string, 3>> seq;
};

bool dominates(const ParetoEntry& a, const ParetoEntry& b) {
    return a.depth <= b.depth && a.time <= b.time && a.survival >= b.survival && a.seq <= b.seq;
}

double node_cost(const GoodnessWeights& w, int depth, double time, double survival) {
    return w.w_steps * static_cast<double>(depth) + w.w_time * time +
           w.w_detection * (1.0 - survival);
}

AttackPath reconstruct(const Node* node, const std::string& start) {
    std::vector<AttackStep> steps;
    for (const Node* n = node; n && n->parent; n = n->parent) steps.push_back(n->step);
    std::reverse(steps.begin(), steps.end());
    return {start, std::move(steps)};
}

}  // namespace

PlanResult plan_from_footholds(const Network& state, const RuleSet& ruleset,
                               const std::vector<std::string>& footholds, const Goal& goal,
                               const GoodnessWeights& weights, const SearchLimits& limits) {
    if (limits.max_depth < 1 || limits.max_expansions < 1) {
        throw ConfigError("search limits must be positive");
    }
    for (const auto& f : footholds) {
        if (!state.containers.count(f)) throw LookupError("unknown container '" + f + "'");
    }

    std::deque<Node> arena;
    std::priority_queue<QueueEntry, std::vector<QueueEntry>, std::greater<>> open;
    std::map<std::pair<std::string, std::string>, std::vector<ParetoEntry>> seen;

    auto push_node = [&](Node&& node) {
        std::pair<std::string, std::string> key{state_fingerprint(node.state), node.foothold};
        ParetoEntry entry{node.depth, node.time, node.survival, sequence_key(&node)};
        auto& entries = seen[key];
        for (const auto& e : entries) {
            if (dominates(e, entry)) return;
        }
        std::erase_if(entries, [&](const ParetoEntry& e) { return dominates(entry, e); });
        entries.push_back(entry);
        arena.push_back(std::move(node));
        const Node* stored = &arena.back();
        open.push({stored->cost, stored->depth, std::move(entry.seq), stored});
    };

    for (const auto& f : footholds) {
        Node root;
        root.state = state;
        root.foothold = f;
        root.cost = node_cost(weights, 0, 0.0, 1.0);
        push_node(std::move(root));
    }

    PlanResult result;
    while (!open.empty()) {
        if (result.expansions_used >= limits.max_expansions) {
            result.exhausted = true;
            return result;
        }
        QueueEntry top = open.top();
        open.pop();
        const Node* node = top.node;
        ++result.expansions_used;

        if (goal_satisfied(node->state, goal)) {
            // First goal pop is optimal: costs never decrease along a chain.
            const Node* root = node;
            while (root->parent) root = root->parent;
            result.path = reconstruct(node, root->foothold);
            result.cost = path_cost(*result.path, ruleset, weights);
            return result;
        }
        if (node->depth >= limits.max_depth) continue;

        for (const Move& move : applicable_moves(ruleset, node->state, node->foothold)) {
            const Rule& rule = ruleset.at(move.rule);
            RuleApplication applied =
                apply_rule(rule, node->state, node->foothold, move.link, move.dest);
            Node child;
            child.state = std::move(applied.network);
            child.foothold = move.dest;
            child.depth = node->depth + 1;
            child.time = node->time + rule.time_cost;
            child.survival = node->survival * (1.0 - rule.detectability);
            child.cost = node_cost(weights, child.depth, child.time, child.survival);
            child.parent = node;
            child.step = {node->foothold, move.link, move.dest, move.rule};
            push_node(std::move(child));
        }
    }
    return result;  // no goal path within the limits; exhausted stays false
}

PlanResult plan(const Network& network, const RuleSet& ruleset, const std::string& start,
                const Goal& goal, const GoodnessWeights& weights, const SearchLimits& limits) {
    if (!network.containers.count(start)) throw LookupError("unknown container '" + start + "'");
    return plan_from_footholds(network, ruleset, {start}, goal, weights, limits);
}

PlanResult replan_from(const Network& network, const RuleSet& ruleset, const Network& current_state,
                       const Goal& goal, const GoodnessWeights& weights,
                       const SearchLimits& limits) {
    std::vector<std::string> mismatched;
    if (!same_structure(network, current_state, &mismatched)) {
        std::string msg = "current state does not match the network structurally:";
        for (const auto& m : mismatched) msg += " " + m;
        throw StructureError(msg);
    }
    std::vector<std::string> footholds = compromised_containers(current_state);
    if (footholds.empty()) throw ContractError("no foothold: no container is compromised");
    return plan_from_footholds(current_state, ruleset, footholds, goal, weights, limits);
}

}  // namespace pnet

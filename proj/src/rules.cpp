#include "pnet/rules.hpp"

#include "pnet/error.hpp"

#include <algorithm>
#include <cmath>

namespace pnet {

namespace {

constexpr double kRealEqTolerance = 1e-9;

bool values_eq(const FactValue& a, const FactValue& b) {
    if (value_kind(a) != value_kind(b)) return false;
    if (value_kind(a) == ValueKind::real) {
        return std::fabs(std::get<double>(a) - std::get<double>(b)) <= kRealEqTolerance;
    }
    return a == b;
}

bool numeric(const FactValue& v, double& out) {
    if (value_kind(v) == ValueKind::integer) {
        out = static_cast<double>(std::get<std::int64_t>(v));
        return true;
    }
    if (value_kind(v) == ValueKind::real) {
        out = std::get<double>(v);
        return true;
    }
    return false;
}

}  // namespace

const char* pred_op_name(PredOp op) {
    switch (op) {
        case PredOp::eq: return "eq";
        case PredOp::ne: return "ne";
        case PredOp::lt: return "lt";
        case PredOp::le: return "le";
        case PredOp::gt: return "gt";
        case PredOp::ge: return "ge";
        case PredOp::exists: return "exists";
        case PredOp::absent: return "absent";
    }
    return "?";
}

std::optional<PredOp> pred_op_from_name(std::string_view name) {
    if (name == "eq") return PredOp::eq;
    if (name == "ne") return PredOp::ne;
    if (name == "lt") return PredOp::lt;
    if (name == "le") return PredOp::le;
    if (name == "gt") return PredOp::gt;
    if (name == "ge") return PredOp::ge;
    if (name == "exists") return PredOp::exists;
    if (name == "absent") return PredOp::absent;
    return std::nullopt;
}

const char* assign_scope_name(AssignScope s) {
    switch (s) {
        case AssignScope::origin: return "origin";
        case AssignScope::destination: return "destination";
        case AssignScope::global: return "global";
    }
    return "?";
}

std::optional<AssignScope> assign_scope_from_name(std::string_view name) {
    if (name == "origin") return AssignScope::origin;
    if (name == "destination") return AssignScope::destination;
    if (name == "global") return AssignScope::global;
    return std::nullopt;
}

bool eval_predicate(const Network& network, const FactTarget& target, const Predicate& pred) {
    std::optional<FactValue> fact = resolve_fact(network, target, pred.key_or_common_id);
    switch (pred.op) {
        case PredOp::absent:
            return !fact.has_value();
        case PredOp::exists:
            return fact.has_value();
        default:
            break;
    }
    if (!fact) return false;
    if (!pred.value) return false;
    if (pred.op == PredOp::eq) return values_eq(*fact, *pred.value);
    if (pred.op == PredOp::ne) return !values_eq(*fact, *pred.value);
    double lhs = 0.0;
    double rhs = 0.0;
    if (!numeric(*fact, lhs) || !numeric(*pred.value, rhs)) return false;
    switch (pred.op) {
        case PredOp::lt: return lhs < rhs;
        case PredOp::le: return lhs <= rhs;
        case PredOp::gt: return lhs > rhs;
        case PredOp::ge: return lhs >= rhs;
        default: return false;
    }
}

std::string predicate_to_string(const Predicate& pred) {
    std::string s = pred.key_or_common_id;
    s += ' ';
    s += pred_op_name(pred.op);
    if (pred.value) {
        s += ' ';
        s += value_to_string(*pred.value);
    }
    return s;
}

const Rule& RuleSet::at(const std::string& id) const {
    auto it = rules.find(id);
    if (it == rules.end()) throw LookupError("unknown rule '" + id + "'");
    return it->second;
}

const Rule* RuleSet::find(const std::string& id) const {
    auto it = rules.find(id);
    return it == rules.end() ? nullptr : &it->second;
}

namespace {

// Verifies (origin, dest) sit on the link respecting direction.
void check_topology(const Network& network, const std::string& origin, const std::string& link,
                    const std::string& dest) {
    if (!network.containers.count(origin)) throw LookupError("unknown container '" + origin + "'");
    if (!network.containers.count(dest)) throw LookupError("unknown container '" + dest + "'");
    auto it = network.links.find(link);
    if (it == network.links.end()) throw LookupError("unknown link '" + link + "'");
    const Link& l = it->second;
    bool forward = l.endpoint_a == origin && l.endpoint_b == dest;
    bool backward = l.endpoint_a == dest && l.endpoint_b == origin;
    if (l.directed ? !forward : !(forward || backward)) {
        throw TopologyError("link '" + link + "' does not connect '" + origin + "' -> '" + dest +
                            "'" + (l.directed && backward ? " (directed a->b only)" : ""));
    }
}

struct PredGroup {
    const char* label;
    const std::vector<Predicate>* preds;
    FactTarget target;
};

}  // namespace

Applicability check_applicable(const Rule& rule, const Network& network, const std::string& origin,
                               const std::string& link, const std::string& dest) {
    check_topology(network, origin, link, dest);
    const PredGroup groups[] = {
        {"origin", &rule.origin_pre, FactTarget::container(origin)},
        {"link", &rule.link_pre, FactTarget::link(link)},
        {"destination", &rule.dest_pre, FactTarget::container(dest)},
        {"global", &rule.global_pre, FactTarget::global()},
    };
    for (const auto& g : groups) {
        for (const auto& pred : *g.preds) {
            if (!eval_predicate(network, g.target, pred)) {
                return {false, std::string(g.label) + ": " + predicate_to_string(pred)};
            }
        }
    }
    return {true, {}};
}

RuleApplication apply_rule(const Rule& rule, const Network& network, const std::string& origin,
                           const std::string& link, const std::string& dest) {
    Applicability ok = check_applicable(rule, network, origin, link, dest);
    if (!ok) {
        throw ContractError("rule '" + rule.id + "' not applicable on '" + origin + "' -> '" +
                            dest + "': failed " + ok.failing_predicate);
    }
    Network next = network;
    for (const auto& assign : rule.post) {
        switch (assign.scope) {
            case AssignScope::origin:
                next.containers.at(origin).facts.set(assign.key, assign.value);
                break;
            case AssignScope::destination:
                next.containers.at(dest).facts.set(assign.key, assign.value);
                break;
            case AssignScope::global:
                next.global_facts.set(assign.key, assign.value);
                break;
        }
    }
    std::vector<FactDelta> deltas = diff_state(network, next);
    return {std::move(next), std::move(deltas)};
}

std::vector<Move> applicable_moves(const RuleSet& ruleset, const Network& network,
                                   const std::string& origin) {
    if (!network.containers.count(origin)) throw LookupError("unknown container '" + origin + "'");
    std::vector<Move> moves;
    for (const auto& [rule_id, rule] : ruleset.rules) {
        for (const auto& [link_id, link] : network.links) {
            std::string dest;
            if (link.endpoint_a == origin) {
                dest = link.endpoint_b;
            } else if (link.endpoint_b == origin && !link.directed) {
                dest = link.endpoint_a;
            } else {
                continue;
            }
            if (check_applicable(rule, network, origin, link_id, dest).applicable) {
                moves.push_back({rule_id, link_id, dest});
            }
        }
    }
    std::sort(moves.begin(), moves.end());
    return moves;
}

}  // namespace pnet

#pragma once

// Attack-technique rules: conjunctive preconditions over origin/link/
// destination/global fact stores, postconditions that write facts, and the
// applicability/application machinery.

#include "pnet/network.hpp"

#include <compare>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace pnet {

enum class PredOp { eq, ne, lt, le, gt, ge, exists, absent };

const char* pred_op_name(PredOp op);
std::optional<PredOp> pred_op_from_name(std::string_view name);

struct Predicate {
    std::string key_or_common_id;
    PredOp op = PredOp::eq;
    std::optional<FactValue> value;  // required except for exists/absent
};

// Absent facts satisfy only `absent`; every other op on a missing fact is
// false. Ordering ops compare integers and reals numerically; eq/ne across
// kinds is unequal. Real equality uses absolute tolerance 1e-9.
bool eval_predicate(const Network& network, const FactTarget& target, const Predicate& pred);

std::string predicate_to_string(const Predicate& pred);

enum class AssignScope { origin, destination, global };

const char* assign_scope_name(AssignScope s);
std::optional<AssignScope> assign_scope_from_name(std::string_view name);

struct FactAssignment {
    AssignScope scope = AssignScope::destination;
    std::string key;
    FactValue value;
};

enum class StepSide { origin, destination };

struct SymptomSpec {
    std::string indicator;
    double visibility = 0.5;  // [0, 1]
    StepSide location = StepSide::destination;
};

struct Rule {
    std::string id;
    std::string technique;
    std::vector<Predicate> origin_pre;
    std::vector<Predicate> dest_pre;
    std::vector<Predicate> link_pre;
    std::vector<Predicate> global_pre;
    std::vector<FactAssignment> post;  // applied in listed order; later wins
    double time_cost = 1.0;
    double detectability = 0.5;  // [0, 1]
    std::vector<SymptomSpec> symptoms;
};

struct RuleSet {
    std::map<std::string, Rule> rules;

    const Rule& at(const std::string& id) const;  // LookupError if unknown
    const Rule* find(const std::string& id) const;
};

struct Applicability {
    bool applicable = false;
    std::string failing_predicate;  // empty when applicable
    explicit operator bool() const { return applicable; }
};

// Preconditions are checked origin, link, destination, then globals; the
// first failing predicate is reported. (origin, dest) must be the link's
// endpoints respecting direction, otherwise TopologyError.
Applicability check_applicable(const Rule& rule, const Network& network, const std::string& origin,
                               const std::string& link, const std::string& dest);

struct RuleApplication {
    Network network;
    std::vector<FactDelta> deltas;  // matches diff_state(before, after)
};

// Requires check_applicable; otherwise ContractError naming the failing
// predicate. The input network is untouched.
RuleApplication apply_rule(const Rule& rule, const Network& network, const std::string& origin,
                           const std::string& link, const std::string& dest);

struct Move {
    std::string rule;
    std::string link;
    std::string dest;

    friend bool operator==(const Move&, const Move&) = default;
    friend auto operator<=>(const Move&, const Move&) = default;
};

// Every (rule, link, dest) triple applicable out of `origin`, in
// lexicographic order.
std::vector<Move> applicable_moves(const RuleSet& ruleset, const Network& network,
                                   const std::string& origin);

}  // namespace pnet

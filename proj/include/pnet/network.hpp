#pragma once

// Digital-twin data model: containers, links, fact stores, global facts and
// the common-property registry. Networks are immutable values; every
// mutation returns a fresh state or an explicit delta.

#include "pnet/facts.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace pnet {

struct Container {
    std::string id;
    std::string label;
    FactStore facts;
};

struct Link {
    std::string id;
    std::string endpoint_a;
    std::string endpoint_b;
    bool directed = false;  // directed links traverse a -> b only
    FactStore facts;
};

struct Network {
    std::map<std::string, Container> containers;
    std::map<std::string, Link> links;
    FactStore global_facts;
    std::map<std::string, CommonProperty> common_properties;
};

enum class TargetKind { container, link, global };

struct FactTarget {
    TargetKind kind = TargetKind::global;
    std::string id;  // empty for global

    static FactTarget container(std::string id);
    static FactTarget link(std::string id);
    static FactTarget global();

    friend bool operator==(const FactTarget&, const FactTarget&) = default;
    friend auto operator<=>(const FactTarget&, const FactTarget&) = default;
};

std::string target_to_string(const FactTarget& t);

// One recorded fact write. Absent old_value means the fact was created;
// absent new_value means the write removes the fact (the inverse of a
// creation has to take the fact back out).
struct FactDelta {
    FactTarget target;
    std::string key;
    std::optional<FactValue> old_value;
    std::optional<FactValue> new_value;

    FactDelta inverse() const;
};

struct Violation {
    std::string entity;
    std::string message;
};

// Empty result iff every structural invariant holds. Violations are data,
// not errors.
std::vector<Violation> validate_network(const Network& network);

// Looks up by exact key first, then treats key_or_common_id as a
// common-property id and retries with its canonical key. Unknown targets
// throw LookupError.
std::optional<FactValue> resolve_fact(const Network& network, const FactTarget& target,
                                      const std::string& key_or_common_id);

// Returns a network differing from the input only at (target, key).
Network apply_delta(const Network& network, const FactDelta& delta);

Network apply_deltas(const Network& network, const std::vector<FactDelta>& deltas);

// Minimal fact-level diff between two structurally equal networks, ordered
// containers, then links, then globals; entity ids and keys lexicographic.
// Structural mismatch throws StructureError listing the offending ids.
std::vector<FactDelta> diff_state(const Network& a, const Network& b);

bool same_structure(const Network& a, const Network& b,
                    std::vector<std::string>* mismatched = nullptr);

// Canonical text encoding of the full fact state; equal strings mean equal
// states (doubles are encoded bit-exactly).
std::string state_fingerprint(const Network& network);

const FactStore* find_fact_store(const Network& network, const FactTarget& target);

}  // namespace pnet

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace pnet {

// A fact value is one of four kinds. Integer and real are distinct kinds;
// cross-kind values never compare equal.
using FactValue = std::variant<bool, std::int64_t, double, std::string>;

enum class ValueKind { boolean, integer, real, text };

ValueKind value_kind(const FactValue& v);
const char* value_kind_name(ValueKind k);
std::optional<ValueKind> value_kind_from_name(std::string_view name);

// Exact equality, used by state diffing, fingerprints and serialization.
// Predicate equality (with the 1e-9 tolerance on reals) lives in rules.
bool value_exact_equal(const FactValue& a, const FactValue& b);

std::string value_to_string(const FactValue& v);

struct Fact {
    std::string key;
    std::optional<std::string> common_property;  // id into the registry
    FactValue value;
};

struct CommonProperty {
    std::string id;
    std::string canonical_key;
    ValueKind kind = ValueKind::text;
    std::string description;
};

// Ordered fact container. Keys are unique once a network validates, but
// duplicates are representable so validation can report them.
class FactStore {
public:
    const Fact* find(std::string_view key) const;
    Fact* find_mut(std::string_view key);

    // Overwrites an existing fact's value or appends a new fact.
    void set(const std::string& key, FactValue value);
    void erase(std::string_view key);
    void add(Fact f) { facts_.push_back(std::move(f)); }

    const std::vector<Fact>& items() const { return facts_; }
    bool empty() const { return facts_.empty(); }
    std::size_t size() const { return facts_.size(); }

    // Union of keys, sorted, duplicates removed.
    std::vector<std::string> sorted_keys() const;

private:
    std::vector<Fact> facts_;
};

}  // namespace pnet

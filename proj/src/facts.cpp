#include "pnet/facts.hpp"

#include <algorithm>
#include <cstdio>

namespace pnet {

ValueKind value_kind(const FactValue& v) {
    switch (v.index()) {
        case 0: return ValueKind::boolean;
        case 1: return ValueKind::integer;
        case 2: return ValueKind::real;
        default: return ValueKind::text;
    }
}

const char* value_kind_name(ValueKind k) {
    switch (k) {
        case ValueKind::boolean: return "boolean";
        case ValueKind::integer: return "integer";
        case ValueKind::real: return "real";
        case ValueKind::text: return "text";
    }
    return "?";
}

std::optional<ValueKind> value_kind_from_name(std::string_view name) {
    if (name == "boolean") return ValueKind::boolean;
    if (name == "integer") return ValueKind::integer;
    if (name == "real") return ValueKind::real;
    if (name == "text") return ValueKind::text;
    return std::nullopt;
}

bool value_exact_equal(const FactValue& a, const FactValue& b) {
    return a == b;
}

std::string value_to_string(const FactValue& v) {
    switch (v.index()) {
        case 0: return std::get<bool>(v) ? "true" : "false";
        case 1: return std::to_string(std::get<std::int64_t>(v));
        case 2: {
            char buf[64];
            std::snprintf(buf, sizeof buf, "%.17g", std::get<double>(v));
            return buf;
        }
        default: return std::get<std::string>(v);
    }
}

const Fact* FactStore::find(std::string_view key) const {
    for (const auto& f : facts_) {
        if (f.key == key) return &f;
    }
    return nullptr;
}

Fact* FactStore::find_mut(std::string_view key) {
    for (auto& f : facts_) {
        if (f.key == key) return &f;
    }
    return nullptr;
}

void FactStore::set(const std::string& key, FactValue value) {
    if (Fact* f = find_mut(key)) {
        f->value = std::move(value);
        return;
    }
    facts_.push_back(Fact{key, std::nullopt, std::move(value)});
}

void FactStore::erase(std::string_view key) {
    auto it = std::find_if(facts_.begin(), facts_.end(),
                           [&](const Fact& f) { return f.key == key; });
    if (it != facts_.end()) facts_.erase(it);
}

std::vector<std::string> FactStore::sorted_keys() const {
    std::vector<std::string> keys;
    keys.reserve(facts_.size());
    for (const auto& f : facts_) keys.push_back(f.key);
    std::sort(keys.begin(), keys.end());
    keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
    return keys;
}

}  // namespace pnet

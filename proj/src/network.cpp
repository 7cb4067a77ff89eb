#include "pnet/network.hpp"

#include "pnet/error.hpp"

#include <algorithm>
#include <cstdio>
#include <cstring>
#include <set>
#include <sstream>

namespace pnet {

FactTarget FactTarget::container(std::string id) {
    return FactTarget{TargetKind::container, std::move(id)};
}

FactTarget FactTarget::link(std::string id) {
    return FactTarget{TargetKind::link, std::move(id)};
}

FactTarget FactTarget::global() {
    return FactTarget{TargetKind::global, {}};
}

std::string target_to_string(const FactTarget& t) {
    switch (t.kind) {
        case TargetKind::container: return "container '" + t.id + "'";
        case TargetKind::link: return "link '" + t.id + "'";
        case TargetKind::global: return "global";
    }
    return "?";
}

FactDelta FactDelta::inverse() const {
    return FactDelta{target, key, new_value, old_value};
}

namespace {

void validate_store(const Network& net, const std::string& entity, const FactStore& store,
                    std::vector<Violation>& out) {
    std::set<std::string> seen;
    for (const auto& fact : store.items()) {
        if (!seen.insert(fact.key).second) {
            out.push_back({entity, "duplicate fact key '" + fact.key + "'"});
        }
        if (fact.common_property) {
            auto it = net.common_properties.find(*fact.common_property);
            if (it == net.common_properties.end()) {
                out.push_back({entity, "fact '" + fact.key + "' references unknown common property '" +
                                           *fact.common_property + "'"});
                continue;
            }
            const CommonProperty& cp = it->second;
            if (fact.key != cp.canonical_key) {
                out.push_back({entity, "fact '" + fact.key + "' must use canonical key '" +
                                           cp.canonical_key + "' of common property '" + cp.id + "'"});
            }
            if (value_kind(fact.value) != cp.kind) {
                out.push_back({entity, "fact '" + fact.key + "' has kind " +
                                           value_kind_name(value_kind(fact.value)) +
                                           " but common property '" + cp.id + "' requires " +
                                           value_kind_name(cp.kind)});
            }
        }
    }
}

}  // namespace

std::vector<Violation> validate_network(const Network& network) {
    std::vector<Violation> out;
    for (const auto& [id, c] : network.containers) {
        if (id != c.id) out.push_back({id, "container key does not match container id '" + c.id + "'"});
        validate_store(network, "container '" + id + "'", c.facts, out);
    }
    for (const auto& [id, l] : network.links) {
        if (id != l.id) out.push_back({id, "link key does not match link id '" + l.id + "'"});
        if (!network.containers.count(l.endpoint_a)) {
            out.push_back({id, "link endpoint_a references missing container '" + l.endpoint_a + "'"});
        }
        if (!network.containers.count(l.endpoint_b)) {
            out.push_back({id, "link endpoint_b references missing container '" + l.endpoint_b + "'"});
        }
        if (l.endpoint_a == l.endpoint_b) {
            out.push_back({id, "link endpoints must differ (self-loop on '" + l.endpoint_a + "')"});
        }
        validate_store(network, "link '" + id + "'", l.facts, out);
    }
    validate_store(network, "global", network.global_facts, out);
    for (const auto& [id, cp] : network.common_properties) {
        if (id != cp.id) out.push_back({id, "registry key does not match common property id '" + cp.id + "'"});
        if (cp.canonical_key.empty()) out.push_back({id, "common property has empty canonical_key"});
    }
    return out;
}

const FactStore* find_fact_store(const Network& network, const FactTarget& target) {
    switch (target.kind) {
        case TargetKind::container: {
            auto it = network.containers.find(target.id);
            return it == network.containers.end() ? nullptr : &it->second.facts;
        }
        case TargetKind::link: {
            auto it = network.links.find(target.id);
            return it == network.links.end() ? nullptr : &it->second.facts;
        }
        case TargetKind::global:
            return &network.global_facts;
    }
    return nullptr;
}

namespace {

FactStore* find_fact_store_mut(Network& network, const FactTarget& target) {
    return const_cast<FactStore*>(find_fact_store(network, target));
}

}  // namespace

std::optional<FactValue> resolve_fact(const Network& network, const FactTarget& target,
                                      const std::string& key_or_common_id) {
    const FactStore* store = find_fact_store(network, target);
    if (!store) throw LookupError("unknown " + target_to_string(target));
    if (const Fact* f = store->find(key_or_common_id)) return f->value;
    auto cp = network.common_properties.find(key_or_common_id);
    if (cp != network.common_properties.end()) {
        if (const Fact* f = store->find(cp->second.canonical_key)) return f->value;
    }
    return std::nullopt;
}

Network apply_delta(const Network& network, const FactDelta& delta) {
    Network next = network;
    FactStore* store = find_fact_store_mut(next, delta.target);
    if (!store) throw LookupError("delta targets unknown " + target_to_string(delta.target));
    if (delta.new_value) {
        store->set(delta.key, *delta.new_value);
    } else {
        store->erase(delta.key);
    }
    return next;
}

Network apply_deltas(const Network& network, const std::vector<FactDelta>& deltas) {
    Network state = network;
    for (const auto& d : deltas) {
        FactStore* store = find_fact_store_mut(state, d.target);
        if (!store) throw LookupError("delta targets unknown " + target_to_string(d.target));
        if (d.new_value) {
            store->set(d.key, *d.new_value);
        } else {
            store->erase(d.key);
        }
    }
    return state;
}

bool same_structure(const Network& a, const Network& b, std::vector<std::string>* mismatched) {
    bool ok = true;
    auto note = [&](const std::string& id) {
        ok = false;
        if (mismatched) mismatched->push_back(id);
    };
    for (const auto& [id, c] : a.containers) {
        (void)c;
        if (!b.containers.count(id)) note("container '" + id + "'");
    }
    for (const auto& [id, c] : b.containers) {
        (void)c;
        if (!a.containers.count(id)) note("container '" + id + "'");
    }
    for (const auto& [id, l] : a.links) {
        auto it = b.links.find(id);
        if (it == b.links.end()) {
            note("link '" + id + "'");
        } else if (it->second.endpoint_a != l.endpoint_a || it->second.endpoint_b != l.endpoint_b ||
                   it->second.directed != l.directed) {
            note("link '" + id + "'");
        }
    }
    for (const auto& [id, l] : b.links) {
        (void)l;
        if (!a.links.count(id)) note("link '" + id + "'");
    }
    return ok;
}

namespace {

void diff_stores(const FactTarget& target, const FactStore& sa, const FactStore& sb,
                 std::vector<FactDelta>& out) {
    std::vector<std::string> keys = sa.sorted_keys();
    for (const auto& k : sb.sorted_keys()) keys.push_back(k);
    std::sort(keys.begin(), keys.end());
    keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
    for (const auto& key : keys) {
        const Fact* fa = sa.find(key);
        const Fact* fb = sb.find(key);
        if (fa && fb) {
            if (!value_exact_equal(fa->value, fb->value)) {
                out.push_back({target, key, fa->value, fb->value});
            }
        } else if (fa && !fb) {
            out.push_back({target, key, fa->value, std::nullopt});
        } else if (!fa && fb) {
            out.push_back({target, key, std::nullopt, fb->value});
        }
    }
}

}  // namespace

std::vector<FactDelta> diff_state(const Network& a, const Network& b) {
    std::vector<std::string> mismatched;
    if (!same_structure(a, b, &mismatched)) {
        std::string msg = "networks differ structurally:";
        for (const auto& m : mismatched) msg += " " + m;
        throw StructureError(msg);
    }
    std::vector<FactDelta> out;
    for (const auto& [id, c] : a.containers) {
        diff_stores(FactTarget::container(id), c.facts, b.containers.at(id).facts, out);
    }
    for (const auto& [id, l] : a.links) {
        diff_stores(FactTarget::link(id), l.facts, b.links.at(id).facts, out);
    }
    diff_stores(FactTarget::global(), a.global_facts, b.global_facts, out);
    return out;
}

namespace {

void fingerprint_value(const FactValue& v, std::string& out) {
    switch (v.index()) {
        case 0:
            out += std::get<bool>(v) ? "b:1" : "b:0";
            break;
        case 1:
            out += "i:" + std::to_string(std::get<std::int64_t>(v));
            break;
        case 2: {
            // bit-exact encoding so fingerprints never collapse distinct doubles
            double d = std::get<double>(v);
            std::uint64_t bits;
            std::memcpy(&bits, &d, sizeof bits);
            char buf[24];
            std::snprintf(buf, sizeof buf, "r:%016llx", static_cast<unsigned long long>(bits));
            out += buf;
            break;
        }
        default:
            out += "t:" + std::get<std::string>(v);
            break;
    }
}

void fingerprint_store(const FactStore& store, std::string& out) {
    for (const auto& key : store.sorted_keys()) {
        out += key;
        out += '=';
        fingerprint_value(store.find(key)->value, out);
        out += ';';
    }
}

}  // namespace

std::string state_fingerprint(const Network& network) {
    std::string out;
    for (const auto& [id, c] : network.containers) {
        out += "C[" + id + "]{";
        fingerprint_store(c.facts, out);
        out += '}';
    }
    for (const auto& [id, l] : network.links) {
        out += "L[" + id + "]{";
        fingerprint_store(l.facts, out);
        out += '}';
    }
    out += "G{";
    fingerprint_store(network.global_facts, out);
    out += '}';
    return out;
}

}  // namespace pnet

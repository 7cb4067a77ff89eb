#include "pnet/degrade.hpp"

#include "pnet/error.hpp"

#include <cmath>

namespace pnet {

namespace {

constexpr std::uint64_t kFnvOffset = 1469598103934665603ULL;
constexpr std::uint64_t kFnvPrime = 1099511628211ULL;
const std::string kCorruptToken = "__corrupted__";

std::uint64_t fnv1a_bytes(std::uint64_t h, const void* data, std::size_t n) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < n; ++i) {
        h ^= p[i];
        h *= kFnvPrime;
    }
    return h;
}

// Uniform double in [0, 1) from the top 53 bits.
double to_unit(std::uint64_t h) {
    return static_cast<double>(h >> 11) * 0x1.0p-53;
}

}  // namespace

std::uint64_t stable_hash(std::uint64_t seed, std::initializer_list<std::string_view> parts) {
    std::uint64_t h = kFnvOffset;
    h = fnv1a_bytes(h, &seed, sizeof seed);
    for (const auto& part : parts) {
        h = fnv1a_bytes(h, part.data(), part.size());
        unsigned char sep = 0x1f;
        h = fnv1a_bytes(h, &sep, 1);
    }
    return h;
}

namespace {

double draw_unit(const DegradationSpec& spec, std::initializer_list<std::string_view> parts) {
    return to_unit(stable_hash(spec.seed, parts));
}

void check_bounds(const DegradationSpec& spec) {
    auto prob = [](double p) { return p >= 0.0 && p <= 1.0; };
    if (!prob(spec.hide_link_prob)) throw ConfigError("hide_link_prob must lie in [0, 1]");
    if (!prob(spec.perturb_fact_prob)) throw ConfigError("perturb_fact_prob must lie in [0, 1]");
    if (spec.perturb_magnitude < 0.0) throw ConfigError("perturb_magnitude must be >= 0");
    if (spec.spurious_fact_rate < 0.0) throw ConfigError("spurious_fact_rate must be >= 0");
}

// Kind-preserving corruption; returns the input unchanged when the draw
// lands on a no-op (e.g. zero magnitude on numerics).
FactValue perturb_value(const FactValue& value, const DegradationSpec& spec,
                        std::string_view kind_tag, const std::string& entity,
                        const std::string& key) {
    double m = 1.0 - spec.perturb_magnitude +
               2.0 * spec.perturb_magnitude * draw_unit(spec, {"mag", kind_tag, entity, key});
    switch (value_kind(value)) {
        case ValueKind::boolean:
            return !std::get<bool>(value);
        case ValueKind::integer:
            return static_cast<std::int64_t>(
                std::llround(static_cast<double>(std::get<std::int64_t>(value)) * m));
        case ValueKind::real:
            return std::get<double>(value) * m;
        case ValueKind::text:
            return kCorruptToken;
    }
    return value;
}

void perturb_store(const FactStore& original, FactStore& store, const FactTarget& target,
                   std::string_view kind_tag, const std::string& entity,
                   const DegradationSpec& spec, DegradationLog& log) {
    for (const auto& fact : original.items()) {
        if (draw_unit(spec, {"sel", kind_tag, entity, fact.key}) >= spec.perturb_fact_prob) {
            continue;
        }
        FactValue next = perturb_value(fact.value, spec, kind_tag, entity, fact.key);
        if (value_exact_equal(next, fact.value)) continue;  // no-op draws stay out of the log
        store.find_mut(fact.key)->value = next;
        log.perturbed.push_back({target, fact.key, fact.value, next});
    }
}

void inject_spurious(Container& container, const DegradationSpec& spec, DegradationLog& log) {
    double rate = spec.spurious_fact_rate;
    auto count = static_cast<std::int64_t>(std::floor(rate));
    double frac = rate - std::floor(rate);
    if (frac > 0.0 && draw_unit(spec, {"spurious-extra", container.id}) < frac) ++count;
    for (std::int64_t i = 0; i < count; ++i) {
        std::string key = "spurious-" + std::to_string(i);
        if (container.facts.find(key)) continue;  // never clobber an authored fact
        bool value = (stable_hash(spec.seed, {"spurious-value", container.id, key}) & 1) != 0;
        container.facts.add({key, std::nullopt, FactValue{value}});
        log.spurious.push_back({FactTarget::container(container.id), key, FactValue{value}});
    }
}

}  // namespace

Degraded degrade_network(const Network& network, const DegradationSpec& spec) {
    check_bounds(spec);
    Degraded result;
    result.network = network;
    Network& net = result.network;
    DegradationLog& log = result.log;

    for (const auto& [id, link] : network.links) {
        (void)link;
        if (draw_unit(spec, {"hide", id}) < spec.hide_link_prob) {
            net.links.erase(id);
            log.hidden_links.push_back(id);
        }
    }
    for (const auto& [id, container] : network.containers) {
        perturb_store(container.facts, net.containers.at(id).facts, FactTarget::container(id),
                      "container", id, spec, log);
    }
    for (const auto& [id, link] : network.links) {
        if (!net.links.count(id)) continue;  // hidden
        perturb_store(link.facts, net.links.at(id).facts, FactTarget::link(id), "link", id, spec,
                      log);
    }
    perturb_store(network.global_facts, net.global_facts, FactTarget::global(), "global", "", spec,
                  log);
    for (auto& [id, container] : net.containers) {
        (void)id;
        inject_spurious(container, spec, log);
    }
    return result;
}

Network replay_degradation(const Network& network, const DegradationLog& log) {
    Network net = network;
    for (const auto& id : log.hidden_links) {
        if (!net.links.erase(id)) throw LookupError("log hides unknown link '" + id + "'");
    }
    for (const auto& delta : log.perturbed) {
        FactStore* store = const_cast<FactStore*>(find_fact_store(net, delta.target));
        if (!store) throw LookupError("log perturbs unknown " + target_to_string(delta.target));
        if (delta.new_value) {
            store->set(delta.key, *delta.new_value);
        } else {
            store->erase(delta.key);
        }
    }
    for (const auto& fact : log.spurious) {
        FactStore* store = const_cast<FactStore*>(find_fact_store(net, fact.target));
        if (!store) throw LookupError("log injects into unknown " + target_to_string(fact.target));
        store->add({fact.key, std::nullopt, fact.value});
    }
    return net;
}

}  // namespace pnet

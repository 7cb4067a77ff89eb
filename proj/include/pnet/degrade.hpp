#pragma once

// Controlled error, noise and fog-of-war: seeded, reproducible degradation
// of a ground-truth network for whatever process is being kept in the dark.

#include "pnet/network.hpp"

#include <cstdint>
#include <vector>

namespace pnet {

struct DegradationSpec {
    double hide_link_prob = 0.0;     // [0, 1] fog: drop each link
    double perturb_fact_prob = 0.0;  // [0, 1] error: corrupt each fact
    double perturb_magnitude = 0.0;  // >= 0 relative scale for numeric facts
    double spurious_fact_rate = 0.0; // >= 0 noise: expected spurious facts per container
    std::uint64_t seed = 0;
};

struct SpuriousFact {
    FactTarget target;
    std::string key;
    FactValue value;
};

// Complete audit trail: replaying the log on the original network
// reproduces the degraded network exactly.
struct DegradationLog {
    std::vector<std::string> hidden_links;
    std::vector<FactDelta> perturbed;
    std::vector<SpuriousFact> spurious;

    bool empty() const { return hidden_links.empty() && perturbed.empty() && spurious.empty(); }
};

struct Degraded {
    Network network;
    DegradationLog log;
};

// Pure function of (network, spec). Per-entity draws hash (seed, entity id,
// fact key), so adding unrelated entities never changes existing outcomes.
// Out-of-bounds spec values throw ConfigError.
Degraded degrade_network(const Network& network, const DegradationSpec& spec);

// Applies a recorded log without any randomness. Unknown entities throw
// LookupError.
Network replay_degradation(const Network& network, const DegradationLog& log);

// Stable 64-bit FNV-1a over the seed and the given parts; the basis of all
// degradation draws. Exposed for determinism tests.
std::uint64_t stable_hash(std::uint64_t seed, std::initializer_list<std::string_view> parts);

}  // namespace pnet

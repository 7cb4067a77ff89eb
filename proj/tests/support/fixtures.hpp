#pragma once

// Shared test fixtures: programmatic copies of the shipped scenarios, a
// seeded scenario generator for oracle comparisons, and small deterministic
// RNG helpers (standard distributions are not bit-stable across platforms,
// so draws are hand-rolled from splitmix64).

#include "pnet/scenario.hpp"

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace pnet::test {

inline std::filesystem::path fixture_path(const std::string& name) {
    return std::filesystem::path(PNET_SCENARIO_DIR) / name;
}

class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    double unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    // inclusive bounds
    std::int64_t range(std::int64_t lo, std::int64_t hi) {
        return lo + static_cast<std::int64_t>(next() % static_cast<std::uint64_t>(hi - lo + 1));
    }

    bool chance(double p) { return unit() < p; }

    template <typename T>
    const T& pick(const std::vector<T>& items) {
        return items[static_cast<std::size_t>(next() % items.size())];
    }

private:
    std::uint64_t state_;
};

inline Fact bool_fact(std::string key, bool v) {
    return Fact{std::move(key), std::nullopt, FactValue{v}};
}

inline Predicate pred_eq(std::string key, FactValue v) {
    return Predicate{std::move(key), PredOp::eq, std::move(v)};
}

// The three-node fixture: A(workstation) -L1/ssh- B(app-server) -L2/rdp-
// C(database), plus the L3/https shortcut A-C. R1/R3 need an unpatched
// destination; R2 moves laterally over rdp.
inline Scenario make_triangle(bool c_patched = true, double r3_detectability = 0.3) {
    Scenario s;
    Network& net = s.network;

    net.common_properties["cp.protocol"] =
        CommonProperty{"cp.protocol", "protocol", ValueKind::text, "service protocol"};
    net.common_properties["cp.patched"] =
        CommonProperty{"cp.patched", "patched", ValueKind::boolean, "patch status"};

    Container a{"A", "workstation", {}};
    a.facts.add(bool_fact("compromised", true));
    Container b{"B", "app-server", {}};
    b.facts.add({"patched", "cp.patched", FactValue{false}});
    Container c{"C", "database", {}};
    c.facts.add({"patched", "cp.patched", FactValue{c_patched}});
    net.containers = {{"A", a}, {"B", b}, {"C", c}};

    auto link = [](std::string id, std::string ea, std::string eb, std::string proto) {
        Link l{std::move(id), std::move(ea), std::move(eb), false, {}};
        l.facts.add({"protocol", "cp.protocol", FactValue{std::move(proto)}});
        return l;
    };
    net.links = {{"L1", link("L1", "A", "B", "ssh")},
                 {"L2", link("L2", "B", "C", "rdp")},
                 {"L3", link("L3", "A", "C", "https")}};

    net.global_facts.add(bool_fact("business_hours", true));

    Rule r1;
    r1.id = "R1";
    r1.technique = "remote-exploit";
    r1.origin_pre = {pred_eq("compromised", FactValue{true})};
    r1.link_pre = {pred_eq("protocol", FactValue{std::string("ssh")})};
    r1.dest_pre = {pred_eq("patched", FactValue{false})};
    r1.post = {{AssignScope::destination, "compromised", FactValue{true}}};
    r1.time_cost = 2.0;
    r1.detectability = 0.4;
    r1.symptoms = {{"auth-anomaly", 1.0, StepSide::destination}};

    Rule r2;
    r2.id = "R2";
    r2.technique = "lateral-move";
    r2.origin_pre = {pred_eq("compromised", FactValue{true})};
    r2.link_pre = {pred_eq("protocol", FactValue{std::string("rdp")})};
    r2.post = {{AssignScope::destination, "compromised", FactValue{true}}};
    r2.time_cost = 1.0;
    r2.detectability = 0.6;
    r2.symptoms = {{"rdp-session-spike", 0.7, StepSide::destination}};

    Rule r3;
    r3.id = "R3";
    r3.technique = "remote-exploit";
    r3.origin_pre = {pred_eq("compromised", FactValue{true})};
    r3.link_pre = {pred_eq("protocol", FactValue{std::string("https")})};
    r3.dest_pre = {pred_eq("patched", FactValue{false})};
    r3.post = {{AssignScope::destination, "compromised", FactValue{true}}};
    r3.time_cost = 1.0;
    r3.detectability = r3_detectability;
    r3.symptoms = {{"tls-probe", 0.6, StepSide::destination}};

    s.ruleset.rules = {{"R1", r1}, {"R2", r2}, {"R3", r3}};

    s.attacker.start = "A";
    s.attacker.goal.predicates = {{"C", pred_eq("compromised", FactValue{true})}};
    s.attacker.weights = {1.0, 1.0, 1.0};
    return s;
}

inline Scenario make_shorter_longer() { return make_triangle(false, 0.99); }

// Random connected scenario inside the oracle-friendly envelope:
// <= 6 containers, <= 8 links, <= 6 rules.
inline Scenario random_scenario(std::uint64_t seed) {
    Rng rng(seed);
    Scenario s;
    Network& net = s.network;

    const std::vector<std::string> protocols{"ssh", "rdp", "https"};
    const std::vector<std::string> techniques{"remote-exploit", "lateral-move", "phish"};

    int n = static_cast<int>(rng.range(3, 6));
    for (int i = 0; i < n; ++i) {
        Container c{"C" + std::to_string(i), "host", {}};
        if (i == 0) c.facts.add(bool_fact("compromised", true));
        c.facts.add(bool_fact("patched", rng.chance(0.4)));
        if (rng.chance(0.3)) {
            c.facts.add({"criticality", std::nullopt, FactValue{rng.range(1, 5)}});
        }
        net.containers[c.id] = c;
    }

    int extra = static_cast<int>(rng.range(0, 4));
    int total_links = std::min(8, (n - 1) + extra);
    int link_no = 0;
    auto add_link = [&](const std::string& a, const std::string& b) {
        Link l{"L" + std::to_string(link_no++), a, b, rng.chance(0.15), {}};
        l.facts.add({"protocol", std::nullopt, FactValue{rng.pick(protocols)}});
        net.links[l.id] = l;
    };
    for (int i = 1; i < n; ++i) {
        add_link("C" + std::to_string(rng.range(0, i - 1)), "C" + std::to_string(i));
    }
    while (link_no < total_links) {
        auto a = rng.range(0, n - 1);
        auto b = rng.range(0, n - 1);
        if (a == b) continue;
        add_link("C" + std::to_string(a), "C" + std::to_string(b));
    }

    int n_rules = static_cast<int>(rng.range(2, 6));
    for (int i = 0; i < n_rules; ++i) {
        Rule r;
        r.id = "R" + std::to_string(i);
        r.technique = rng.pick(techniques);
        r.origin_pre = {pred_eq("compromised", FactValue{true})};
        r.link_pre = {pred_eq("protocol", FactValue{rng.pick(protocols)})};
        if (rng.chance(0.4)) r.dest_pre = {pred_eq("patched", FactValue{false})};
        // some techniques stop working once the alarm has been raised,
        // which makes applicability depend on step order
        if (rng.chance(0.25)) {
            r.global_pre = {Predicate{"alert_level", PredOp::absent, std::nullopt}};
        }
        r.post = {{AssignScope::destination, "compromised", FactValue{true}}};
        if (rng.chance(0.25)) {
            r.post.push_back({AssignScope::global, "alert_level", FactValue{rng.range(1, 3)}});
        }
        if (rng.chance(0.15)) {
            // noisy exploits get the destination patched as a side effect
            r.post.push_back({AssignScope::destination, "patched", FactValue{true}});
        }
        r.time_cost = 0.5 * static_cast<double>(rng.range(1, 6));
        r.detectability = 0.1 * static_cast<double>(rng.range(1, 9));
        s.ruleset.rules[r.id] = r;
    }

    s.attacker.start = "C0";
    s.attacker.goal.predicates = {
        {"C" + std::to_string(n - 1), pred_eq("compromised", FactValue{true})}};
    s.attacker.weights = {0.25 * static_cast<double>(rng.range(0, 8)),
                          0.25 * static_cast<double>(rng.range(0, 8)),
                          0.25 * static_cast<double>(rng.range(0, 8))};
    if (s.attacker.weights.w_steps == 0.0 && s.attacker.weights.w_time == 0.0 &&
        s.attacker.weights.w_detection == 0.0) {
        s.attacker.weights.w_steps = 1.0;
    }
    return s;
}

// Random syntactically-valid path over a synthetic id universe; similarity
// operators do not require semantic validity.
inline AttackPath random_path(Rng& rng, int max_len = 6) {
    AttackPath p;
    int start = static_cast<int>(rng.range(0, 5));
    p.start = "X" + std::to_string(start);
    int len = static_cast<int>(rng.range(0, max_len));
    std::string at = p.start;
    for (int i = 0; i < len; ++i) {
        std::string next = "X" + std::to_string(rng.range(0, 5));
        AttackStep step;
        step.origin = at;
        step.dest = next;
        step.link = "E" + std::to_string(rng.range(0, 9));
        step.rule = "T" + std::to_string(rng.range(0, 5));
        p.steps.push_back(step);
        at = next;
    }
    return p;
}

// Ruleset giving the synthetic T* rules technique labels (three rules share
// a label so technique agreement differs from rule-id agreement).
inline RuleSet synthetic_ruleset() {
    RuleSet rs;
    for (int i = 0; i < 6; ++i) {
        Rule r;
        r.id = "T" + std::to_string(i);
        r.technique = "tech-" + std::to_string(i % 3);
        rs.rules[r.id] = r;
    }
    return rs;
}

// Independent argmin over enumerated paths: minimal cost, then fewest
// steps, then lexicographic (rule, link, dest) sequence. min_count counts
// paths sharing the minimal cost (argmin uniqueness).
struct OracleBest {
    bool found = false;
    double cost = 0.0;
    AttackPath path;
    int min_count = 0;
};

inline OracleBest oracle_best(const std::vector<AttackPath>& paths, const RuleSet& ruleset,
                              const GoodnessWeights& weights) {
    OracleBest best;
    auto seq_key = [](const AttackPath& p) {
        std::vector<std::array<std::string, 3>> key;
        for (const auto& s : p.steps) key.push_back({s.rule, s.link, s.dest});
        return key;
    };
    for (const auto& p : paths) {
        double cost = path_cost(p, ruleset, weights);
        if (!best.found || cost < best.cost) {
            best = {true, cost, p, 1};
            continue;
        }
        if (cost == best.cost) {
            ++best.min_count;
            if (p.steps.size() < best.path.steps.size() ||
                (p.steps.size() == best.path.steps.size() && seq_key(p) < seq_key(best.path))) {
                best.path = p;
            }
        }
    }
    return best;
}

}  // namespace pnet::test

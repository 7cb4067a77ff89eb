// Scenario file parsing, validation and canonical emission.

#include "pnet/scenario.hpp"

#include "pnet/error.hpp"
#include "pnet/json_io.hpp"

#include <fstream>
#include <sstream>

namespace pnet {

namespace {

[[noreturn]] void fail(const std::string& where, const std::string& what) {
    throw ScenarioError(where + ": " + what);
}

const Json& require(const Json& j, const char* field, const std::string& where) {
    if (!j.is_object()) fail(where, "expected an object");
    auto it = j.find(field);
    if (it == j.end()) fail(where, std::string("missing required field '") + field + "'");
    return *it;
}

std::string require_string(const Json& j, const char* field, const std::string& where) {
    const Json& v = require(j, field, where);
    if (!v.is_string()) fail(where + "." + field, "expected a string");
    return v.get<std::string>();
}

double number_or(const Json& j, const char* field, double fallback, const std::string& where) {
    auto it = j.find(field);
    if (!j.is_object() || it == j.end()) return fallback;
    if (!it->is_number()) fail(where + "." + field, "expected a number");
    return it->get<double>();
}

Fact parse_fact(const Json& j, const std::string& where) {
    Fact fact;
    fact.key = require_string(j, "key", where);
    fact.value = value_from_json(require(j, "value", where), where + ".value");
    if (auto it = j.find("common_property"); it != j.end() && !it->is_null()) {
        if (!it->is_string()) fail(where + ".common_property", "expected a string id");
        fact.common_property = it->get<std::string>();
    }
    return fact;
}

FactStore parse_facts(const Json& j, const char* field, const std::string& where) {
    FactStore store;
    auto it = j.find(field);
    if (it == j.end()) return store;
    if (!it->is_array()) fail(where + "." + field, "expected an array");
    for (std::size_t i = 0; i < it->size(); ++i) {
        store.add(parse_fact((*it)[i], where + "." + field + "[" + std::to_string(i) + "]"));
    }
    return store;
}

Predicate parse_predicate(const Json& j, const std::string& where) {
    Predicate pred;
    pred.key_or_common_id = require_string(j, "key_or_common_id", where);
    std::string op = require_string(j, "op", where);
    auto parsed = pred_op_from_name(op);
    if (!parsed) fail(where + ".op", "unknown operator '" + op + "'");
    pred.op = *parsed;
    auto it = j.find("value");
    bool has_value = it != j.end() && !it->is_null();
    if (pred.op == PredOp::exists || pred.op == PredOp::absent) {
        if (has_value) fail(where + ".value", "exists/absent take no value");
    } else {
        if (!has_value) fail(where, std::string("operator '") + op + "' requires a value");
        pred.value = value_from_json(*it, where + ".value");
        if ((pred.op == PredOp::lt || pred.op == PredOp::le || pred.op == PredOp::gt ||
             pred.op == PredOp::ge)) {
            ValueKind k = value_kind(*pred.value);
            if (k != ValueKind::integer && k != ValueKind::real) {
                fail(where + ".value", "ordering operators need an integer or real value");
            }
        }
    }
    return pred;
}

std::vector<Predicate> parse_predicates(const Json& j, const char* field, const std::string& where) {
    std::vector<Predicate> preds;
    auto it = j.find(field);
    if (it == j.end()) return preds;
    if (!it->is_array()) fail(where + "." + field, "expected an array");
    for (std::size_t i = 0; i < it->size(); ++i) {
        preds.push_back(parse_predicate((*it)[i], where + "." + field + "[" + std::to_string(i) + "]"));
    }
    return preds;
}

Rule parse_rule(const Json& j, const std::string& where) {
    Rule rule;
    rule.id = require_string(j, "id", where);
    rule.technique = require_string(j, "technique", where);
    rule.origin_pre = parse_predicates(j, "origin_pre", where);
    rule.dest_pre = parse_predicates(j, "dest_pre", where);
    rule.link_pre = parse_predicates(j, "link_pre", where);
    rule.global_pre = parse_predicates(j, "global_pre", where);
    if (auto it = j.find("post"); it != j.end()) {
        if (!it->is_array()) fail(where + ".post", "expected an array");
        for (std::size_t i = 0; i < it->size(); ++i) {
            std::string at = where + ".post[" + std::to_string(i) + "]";
            const Json& a = (*it)[i];
            FactAssignment assign;
            std::string scope = require_string(a, "scope", at);
            auto parsed = assign_scope_from_name(scope);
            if (!parsed) fail(at + ".scope", "expected origin, destination or global");
            assign.scope = *parsed;
            assign.key = require_string(a, "key", at);
            assign.value = value_from_json(require(a, "value", at), at + ".value");
            rule.post.push_back(std::move(assign));
        }
    }
    rule.time_cost = number_or(j, "time_cost", 1.0, where);
    if (rule.time_cost < 0.0) fail(where + ".time_cost", "must be >= 0");
    rule.detectability = number_or(j, "detectability", 0.5, where);
    if (rule.detectability < 0.0 || rule.detectability > 1.0) {
        fail(where + ".detectability", "must lie in [0, 1]");
    }
    if (auto it = j.find("symptoms"); it != j.end()) {
        if (!it->is_array()) fail(where + ".symptoms", "expected an array");
        for (std::size_t i = 0; i < it->size(); ++i) {
            std::string at = where + ".symptoms[" + std::to_string(i) + "]";
            const Json& s = (*it)[i];
            SymptomSpec spec;
            spec.indicator = require_string(s, "indicator", at);
            spec.visibility = number_or(s, "visibility", 0.5, at);
            if (spec.visibility < 0.0 || spec.visibility > 1.0) {
                fail(at + ".visibility", "must lie in [0, 1]");
            }
            std::string loc = require_string(s, "location", at);
            if (loc == "origin") {
                spec.location = StepSide::origin;
            } else if (loc == "destination") {
                spec.location = StepSide::destination;
            } else {
                fail(at + ".location", "expected origin or destination");
            }
            rule.symptoms.push_back(std::move(spec));
        }
    }
    return rule;
}

GoodnessWeights parse_weights(const Json& j, const std::string& where) {
    GoodnessWeights w;
    w.w_steps = number_or(j, "w_steps", 0.0, where);
    w.w_time = number_or(j, "w_time", 0.0, where);
    w.w_detection = number_or(j, "w_detection", 0.0, where);
    if (w.w_steps < 0.0 || w.w_time < 0.0 || w.w_detection < 0.0) {
        fail(where, "weights must be >= 0");
    }
    if (w.w_steps == 0.0 && w.w_time == 0.0 && w.w_detection == 0.0) {
        fail(where, "at least one weight must be > 0");
    }
    return w;
}

DegradationSpec parse_degradation(const Json& j, const std::string& where) {
    DegradationSpec spec;
    spec.hide_link_prob = number_or(j, "hide_link_prob", 0.0, where);
    spec.perturb_fact_prob = number_or(j, "perturb_fact_prob", 0.0, where);
    spec.perturb_magnitude = number_or(j, "perturb_magnitude", 0.0, where);
    spec.spurious_fact_rate = number_or(j, "spurious_fact_rate", 0.0, where);
    if (auto it = j.find("seed"); it != j.end()) {
        if (!it->is_number_integer() && !it->is_number_unsigned()) {
            fail(where + ".seed", "expected an integer seed");
        }
        spec.seed = it->get<std::uint64_t>();
    }
    auto prob = [&](double p, const char* name) {
        if (p < 0.0 || p > 1.0) fail(where + "." + name, "must lie in [0, 1]");
    };
    prob(spec.hide_link_prob, "hide_link_prob");
    prob(spec.perturb_fact_prob, "perturb_fact_prob");
    if (spec.perturb_magnitude < 0.0) fail(where + ".perturb_magnitude", "must be >= 0");
    if (spec.spurious_fact_rate < 0.0) fail(where + ".spurious_fact_rate", "must be >= 0");
    return spec;
}

Constraints parse_constraints(const Json& j, const std::string& where) {
    Constraints c;
    if (auto it = j.find("proactive_budget"); it != j.end() && !it->is_null()) {
        if (!it->is_number_integer() && !it->is_number_unsigned()) {
            fail(where + ".proactive_budget", "expected an integer");
        }
        c.proactive_budget = it->get<int>();
        if (*c.proactive_budget < 0) fail(where + ".proactive_budget", "must be >= 0");
    }
    if (auto it = j.find("proactive_time_cap"); it != j.end() && !it->is_null()) {
        if (!it->is_number()) fail(where + ".proactive_time_cap", "expected a number");
        c.proactive_time_cap = it->get<double>();
        if (*c.proactive_time_cap < 0.0) fail(where + ".proactive_time_cap", "must be >= 0");
    }
    if (auto it = j.find("reaction_time_cap"); it != j.end() && !it->is_null()) {
        if (!it->is_number()) fail(where + ".reaction_time_cap", "expected a number");
        c.reaction_time_cap = it->get<double>();
        if (*c.reaction_time_cap < 0.0) fail(where + ".reaction_time_cap", "must be >= 0");
    }
    return c;
}

void validate_scenario(Scenario& s, const std::string& source) {
    std::vector<Violation> violations = validate_network(s.network);
    if (!violations.empty()) {
        std::string msg = source + ": network validation failed:";
        for (const auto& v : violations) msg += "\n  " + v.entity + ": " + v.message;
        throw ScenarioError(msg);
    }
    if (!s.network.containers.count(s.attacker.start)) {
        fail(source + ": attacker.start", "unknown container '" + s.attacker.start + "'");
    }
    for (std::size_t i = 0; i < s.attacker.goal.predicates.size(); ++i) {
        const auto& gp = s.attacker.goal.predicates[i];
        if (!s.network.containers.count(gp.container)) {
            fail(source + ": attacker.goal[" + std::to_string(i) + "]",
                 "unknown container '" + gp.container + "'");
        }
    }
    // the attacker's foothold is part of ground truth
    s.network.containers.at(s.attacker.start).facts.set("compromised", FactValue{true});
}

}  // namespace

Scenario parse_scenario(const std::string& json_text, const std::string& source_name) {
    Json j = parse_json_text(json_text, source_name);
    if (!j.is_object()) fail(source_name, "scenario root must be an object");
    Scenario s;

    if (auto it = j.find("common_properties"); it != j.end()) {
        if (!it->is_array()) fail("common_properties", "expected an array");
        for (std::size_t i = 0; i < it->size(); ++i) {
            std::string at = "common_properties[" + std::to_string(i) + "]";
            const Json& c = (*it)[i];
            CommonProperty cp;
            cp.id = require_string(c, "id", at);
            cp.canonical_key = require_string(c, "canonical_key", at);
            std::string kind = require_string(c, "value_kind", at);
            auto parsed = value_kind_from_name(kind);
            if (!parsed) fail(at + ".value_kind", "expected boolean, integer, real or text");
            cp.kind = *parsed;
            if (auto d = c.find("description"); d != c.end() && d->is_string()) {
                cp.description = d->get<std::string>();
            }
            if (!s.network.common_properties.emplace(cp.id, cp).second) {
                fail(at, "duplicate common property id '" + cp.id + "'");
            }
        }
    }

    const Json& containers = require(j, "containers", source_name);
    if (!containers.is_array()) fail("containers", "expected an array");
    for (std::size_t i = 0; i < containers.size(); ++i) {
        std::string at = "containers[" + std::to_string(i) + "]";
        const Json& c = containers[i];
        Container container;
        container.id = require_string(c, "id", at);
        if (auto it = c.find("label"); it != c.end() && it->is_string()) {
            container.label = it->get<std::string>();
        }
        container.facts = parse_facts(c, "facts", at);
        if (!s.network.containers.emplace(container.id, std::move(container)).second) {
            fail(at, "duplicate container id");
        }
    }

    const Json& links = require(j, "links", source_name);
    if (!links.is_array()) fail("links", "expected an array");
    for (std::size_t i = 0; i < links.size(); ++i) {
        std::string at = "links[" + std::to_string(i) + "]";
        const Json& l = links[i];
        Link link;
        link.id = require_string(l, "id", at);
        link.endpoint_a = require_string(l, "endpoint_a", at);
        link.endpoint_b = require_string(l, "endpoint_b", at);
        if (auto it = l.find("directed"); it != l.end()) {
            if (!it->is_boolean()) fail(at + ".directed", "expected a boolean");
            link.directed = it->get<bool>();
        }
        link.facts = parse_facts(l, "facts", at);
        if (!s.network.links.emplace(link.id, std::move(link)).second) {
            fail(at, "duplicate link id");
        }
    }

    s.network.global_facts = parse_facts(j, "global_facts", source_name);

    const Json& rules = require(j, "rules", source_name);
    if (!rules.is_array()) fail("rules", "expected an array");
    for (std::size_t i = 0; i < rules.size(); ++i) {
        std::string at = "rules[" + std::to_string(i) + "]";
        Rule rule = parse_rule(rules[i], at);
        std::string id = rule.id;
        if (!s.ruleset.rules.emplace(id, std::move(rule)).second) {
            fail(at, "duplicate rule id '" + id + "'");
        }
    }

    const Json& attacker = require(j, "attacker", source_name);
    s.attacker.start = require_string(attacker, "start", "attacker");
    const Json& goal = require(attacker, "goal", "attacker");
    if (!goal.is_array()) fail("attacker.goal", "expected an array");
    for (std::size_t i = 0; i < goal.size(); ++i) {
        std::string at = "attacker.goal[" + std::to_string(i) + "]";
        const Json& g = goal[i];
        GoalPredicate gp;
        gp.container = require_string(g, "container", at);
        gp.predicate = parse_predicate(require(g, "predicate", at), at + ".predicate");
        s.attacker.goal.predicates.push_back(std::move(gp));
    }
    s.attacker.weights = parse_weights(require(attacker, "weights", "attacker"), "attacker.weights");

    if (auto it = j.find("degradation"); it != j.end() && !it->is_null()) {
        s.degradation = parse_degradation(*it, "degradation");
    }
    if (auto it = j.find("similarity"); it != j.end() && !it->is_null()) {
        SimilarityConfig cfg;
        cfg.alpha = number_or(*it, "alpha", 0.5, "similarity");
        cfg.tau = number_or(*it, "tau", 0.0, "similarity");
        if (cfg.alpha < 0.0 || cfg.alpha > 1.0) fail("similarity.alpha", "must lie in [0, 1]");
        if (cfg.tau < 0.0 || cfg.tau > 1.0) fail("similarity.tau", "must lie in [0, 1]");
        s.similarity = cfg;
    }
    if (auto it = j.find("constraints"); it != j.end() && !it->is_null()) {
        s.constraints = parse_constraints(*it, "constraints");
    }

    validate_scenario(s, source_name);
    return s;
}

Scenario load_scenario(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ScenarioError(path.string() + ": cannot open file");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_scenario(buf.str(), path.string());
}

namespace {

Json facts_to_json(const FactStore& store) {
    Json arr = Json::array();
    for (const auto& f : store.items()) {
        Json j;
        j["key"] = f.key;
        if (f.common_property) j["common_property"] = *f.common_property;
        j["value"] = value_to_json(f.value);
        arr.push_back(std::move(j));
    }
    return arr;
}

Json predicate_to_json(const Predicate& p) {
    Json j;
    j["key_or_common_id"] = p.key_or_common_id;
    j["op"] = pred_op_name(p.op);
    if (p.value) j["value"] = value_to_json(*p.value);
    return j;
}

Json predicates_to_json(const std::vector<Predicate>& preds) {
    Json arr = Json::array();
    for (const auto& p : preds) arr.push_back(predicate_to_json(p));
    return arr;
}

}  // namespace

std::string save_scenario(const Scenario& scenario) {
    Json j;
    if (!scenario.network.common_properties.empty()) {
        Json arr = Json::array();
        for (const auto& [id, cp] : scenario.network.common_properties) {
            (void)id;
            Json c;
            c["id"] = cp.id;
            c["canonical_key"] = cp.canonical_key;
            c["value_kind"] = value_kind_name(cp.kind);
            c["description"] = cp.description;
            arr.push_back(std::move(c));
        }
        j["common_properties"] = std::move(arr);
    }

    Json containers = Json::array();
    for (const auto& [id, c] : scenario.network.containers) {
        (void)id;
        Json jc;
        jc["id"] = c.id;
        jc["label"] = c.label;
        jc["facts"] = facts_to_json(c.facts);
        containers.push_back(std::move(jc));
    }
    j["containers"] = std::move(containers);

    Json links = Json::array();
    for (const auto& [id, l] : scenario.network.links) {
        (void)id;
        Json jl;
        jl["id"] = l.id;
        jl["endpoint_a"] = l.endpoint_a;
        jl["endpoint_b"] = l.endpoint_b;
        jl["directed"] = l.directed;
        jl["facts"] = facts_to_json(l.facts);
        links.push_back(std::move(jl));
    }
    j["links"] = std::move(links);

    j["global_facts"] = facts_to_json(scenario.network.global_facts);

    Json rules = Json::array();
    for (const auto& [id, r] : scenario.ruleset.rules) {
        (void)id;
        Json jr;
        jr["id"] = r.id;
        jr["technique"] = r.technique;
        jr["origin_pre"] = predicates_to_json(r.origin_pre);
        jr["dest_pre"] = predicates_to_json(r.dest_pre);
        jr["link_pre"] = predicates_to_json(r.link_pre);
        jr["global_pre"] = predicates_to_json(r.global_pre);
        Json post = Json::array();
        for (const auto& a : r.post) {
            Json ja;
            ja["scope"] = assign_scope_name(a.scope);
            ja["key"] = a.key;
            ja["value"] = value_to_json(a.value);
            post.push_back(std::move(ja));
        }
        jr["post"] = std::move(post);
        jr["time_cost"] = r.time_cost;
        jr["detectability"] = r.detectability;
        Json symptoms = Json::array();
        for (const auto& sy : r.symptoms) {
            Json js;
            js["indicator"] = sy.indicator;
            js["visibility"] = sy.visibility;
            js["location"] = sy.location == StepSide::origin ? "origin" : "destination";
            symptoms.push_back(std::move(js));
        }
        jr["symptoms"] = std::move(symptoms);
        rules.push_back(std::move(jr));
    }
    j["rules"] = std::move(rules);

    Json attacker;
    attacker["start"] = scenario.attacker.start;
    Json goal = Json::array();
    for (const auto& gp : scenario.attacker.goal.predicates) {
        Json g;
        g["container"] = gp.container;
        g["predicate"] = predicate_to_json(gp.predicate);
        goal.push_back(std::move(g));
    }
    attacker["goal"] = std::move(goal);
    Json weights;
    weights["w_steps"] = scenario.attacker.weights.w_steps;
    weights["w_time"] = scenario.attacker.weights.w_time;
    weights["w_detection"] = scenario.attacker.weights.w_detection;
    attacker["weights"] = std::move(weights);
    j["attacker"] = std::move(attacker);

    if (scenario.degradation) {
        Json d;
        d["hide_link_prob"] = scenario.degradation->hide_link_prob;
        d["perturb_fact_prob"] = scenario.degradation->perturb_fact_prob;
        d["perturb_magnitude"] = scenario.degradation->perturb_magnitude;
        d["spurious_fact_rate"] = scenario.degradation->spurious_fact_rate;
        d["seed"] = scenario.degradation->seed;
        j["degradation"] = std::move(d);
    }
    if (scenario.similarity) {
        Json sim;
        sim["alpha"] = scenario.similarity->alpha;
        sim["tau"] = scenario.similarity->tau;
        j["similarity"] = std::move(sim);
    }
    if (scenario.constraints) {
        Json c;
        if (scenario.constraints->proactive_budget) {
            c["proactive_budget"] = *scenario.constraints->proactive_budget;
        }
        if (scenario.constraints->proactive_time_cap) {
            c["proactive_time_cap"] = *scenario.constraints->proactive_time_cap;
        }
        if (scenario.constraints->reaction_time_cap) {
            c["reaction_time_cap"] = *scenario.constraints->reaction_time_cap;
        }
        j["constraints"] = std::move(c);
    }

    return dump_json(j);
}

void save_scenario_file(const Scenario& scenario, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ScenarioError(path.string() + ": cannot open file for writing");
    out << save_scenario(scenario);
}

}  // namespace pnet

#include "pnet/error.hpp"
#include "pnet/rules.hpp"

#include "support/fixtures.hpp"

#include <doctest.h>

using namespace pnet;
using test::make_triangle;

TEST_SUITE_BEGIN("rules");

TEST_CASE("check_applicable accepts R1 along A-L1-B") {
    Scenario s = make_triangle();
    Applicability ok = check_applicable(s.ruleset.at("R1"), s.network, "A", "L1", "B");
    CHECK(ok.applicable);
    CHECK(ok.failing_predicate.empty());
}

TEST_CASE("check_applicable reports the first failing predicate") {
    Scenario s = make_triangle();
    // on A-L3-C both the link protocol and the dest patch state fail; the
    // link is checked before the destination
    Applicability ok = check_applicable(s.ruleset.at("R1"), s.network, "A", "L3", "C");
    CHECK_FALSE(ok.applicable);
    CHECK(ok.failing_predicate.find("link") != std::string::npos);
    CHECK(ok.failing_predicate.find("protocol") != std::string::npos);
}

TEST_CASE("exists and absent semantics on missing facts") {
    Scenario s = make_triangle();
    Rule rule = s.ruleset.at("R1");
    rule.dest_pre = {Predicate{"creds_stored", PredOp::exists, std::nullopt}};
    CHECK_FALSE(check_applicable(rule, s.network, "A", "L1", "B").applicable);

    rule.dest_pre = {Predicate{"creds_stored", PredOp::absent, std::nullopt}};
    CHECK(check_applicable(rule, s.network, "A", "L1", "B").applicable);

    // any other operator on a missing fact is false
    rule.dest_pre = {Predicate{"creds_stored", PredOp::ne, FactValue{true}}};
    CHECK_FALSE(check_applicable(rule, s.network, "A", "L1", "B").applicable);
}

TEST_CASE("ordering predicates compare integers and reals numerically") {
    Scenario s = make_triangle();
    s.network.containers.at("B").facts.set("criticality", FactValue{std::int64_t{3}});
    Rule rule = s.ruleset.at("R1");
    rule.dest_pre = {Predicate{"criticality", PredOp::ge, FactValue{2.5}}};
    CHECK(check_applicable(rule, s.network, "A", "L1", "B").applicable);
    rule.dest_pre = {Predicate{"criticality", PredOp::lt, FactValue{std::int64_t{3}}}};
    CHECK_FALSE(check_applicable(rule, s.network, "A", "L1", "B").applicable);
    // ordering against a non-numeric fact is false
    rule.dest_pre = {Predicate{"patched", PredOp::lt, FactValue{std::int64_t{1}}}};
    CHECK_FALSE(check_applicable(rule, s.network, "A", "L1", "B").applicable);
}

TEST_CASE("check_applicable raises topology errors") {
    Scenario s = make_triangle();
    const Rule& r1 = s.ruleset.at("R1");
    CHECK_THROWS_AS(check_applicable(r1, s.network, "A", "L2", "C"), TopologyError);
    CHECK_THROWS_AS(check_applicable(r1, s.network, "A", "L9", "B"), LookupError);

    Scenario directed = make_triangle();
    directed.network.links.at("L1").directed = true;
    CHECK(check_applicable(r1, directed.network, "A", "L1", "B").applicable);
    CHECK_THROWS_AS(check_applicable(r1, directed.network, "B", "L1", "A"), TopologyError);
}

TEST_CASE("apply_rule sets postconditions and reports one delta") {
    Scenario s = make_triangle();
    RuleApplication applied = apply_rule(s.ruleset.at("R1"), s.network, "A", "L1", "B");
    const Fact* f = applied.network.containers.at("B").facts.find("compromised");
    REQUIRE(f);
    CHECK(f->value == FactValue{true});
    REQUIRE(applied.deltas.size() == 1);
    CHECK(applied.deltas[0].key == "compromised");
    CHECK_FALSE(applied.deltas[0].old_value.has_value());
    // the source state is untouched
    CHECK_FALSE(s.network.containers.at("B").facts.find("compromised"));
}

TEST_CASE("apply_rule writes global postconditions") {
    Scenario s = make_triangle();
    Rule rule = s.ruleset.at("R1");
    rule.post.push_back({AssignScope::global, "alert_level", FactValue{std::int64_t{1}}});
    RuleApplication applied = apply_rule(rule, s.network, "A", "L1", "B");
    const Fact* f = applied.network.global_facts.find("alert_level");
    REQUIRE(f);
    CHECK(f->value == FactValue{std::int64_t{1}});
}

TEST_CASE("apply_rule deltas equal diff_state of before and after") {
    Scenario s = make_triangle();
    RuleApplication applied = apply_rule(s.ruleset.at("R1"), s.network, "A", "L1", "B");
    auto expected = diff_state(s.network, applied.network);
    REQUIRE(applied.deltas.size() == expected.size());
    for (std::size_t i = 0; i < expected.size(); ++i) {
        CHECK(applied.deltas[i].target == expected[i].target);
        CHECK(applied.deltas[i].key == expected[i].key);
        CHECK(applied.deltas[i].new_value == expected[i].new_value);
    }
}

TEST_CASE("apply_rule off-contract raises naming the failing predicate") {
    Scenario s = make_triangle();
    CHECK_THROWS_WITH_AS(apply_rule(s.ruleset.at("R1"), s.network, "A", "L3", "C"),
                         doctest::Contains("protocol"), ContractError);
}

TEST_CASE("apply_rule touches only facts named in the postconditions") {
    Scenario s = make_triangle();
    RuleApplication applied = apply_rule(s.ruleset.at("R1"), s.network, "A", "L1", "B");
    for (const auto& d : applied.deltas) {
        bool named = false;
        for (const auto& a : s.ruleset.at("R1").post) named |= a.key == d.key;
        CHECK(named);
    }
}

TEST_CASE("applicable_moves on the triangle") {
    Scenario s = make_triangle();
    auto moves = applicable_moves(s.ruleset, s.network, "A");
    REQUIRE(moves.size() == 1);
    CHECK(moves[0] == Move{"R1", "L1", "B"});

    Network after = apply_rule(s.ruleset.at("R1"), s.network, "A", "L1", "B").network;
    auto from_b = applicable_moves(s.ruleset, after, "B");
    REQUIRE(from_b.size() == 1);
    CHECK(from_b[0] == Move{"R2", "L2", "C"});
}

TEST_CASE("check_applicable never touches the network") {
    Scenario s = make_triangle();
    std::string before = state_fingerprint(s.network);
    check_applicable(s.ruleset.at("R1"), s.network, "A", "L1", "B");
    check_applicable(s.ruleset.at("R3"), s.network, "A", "L3", "C");
    applicable_moves(s.ruleset, s.network, "A");
    CHECK(state_fingerprint(s.network) == before);
}

TEST_CASE("applicable_moves of an isolated container is empty") {
    Scenario s = make_triangle();
    Container d{"D", "printer", {}};
    d.facts.add(test::bool_fact("compromised", true));
    s.network.containers["D"] = d;
    CHECK(applicable_moves(s.ruleset, s.network, "D").empty());
}

// Brute-force equivalence: applicable_moves must contain exactly the
// triples where check_applicable succeeds over every valid topology.
TEST_CASE("applicable_moves equals the exhaustive triple scan") {
    test::Rng rng(77);
    for (int trial = 0; trial < 20; ++trial) {
        Scenario s = test::random_scenario(1000 + trial);
        for (const auto& [origin, container] : s.network.containers) {
            (void)container;
            std::vector<Move> expected;
            for (const auto& [rule_id, rule] : s.ruleset.rules) {
                for (const auto& [link_id, link] : s.network.links) {
                    std::string dest;
                    if (link.endpoint_a == origin) {
                        dest = link.endpoint_b;
                    } else if (link.endpoint_b == origin && !link.directed) {
                        dest = link.endpoint_a;
                    } else {
                        continue;
                    }
                    if (check_applicable(rule, s.network, origin, link_id, dest).applicable) {
                        expected.push_back({rule_id, link_id, dest});
                    }
                }
            }
            std::sort(expected.begin(), expected.end());
            CHECK(applicable_moves(s.ruleset, s.network, origin) == expected);
        }
    }
    (void)rng;
}

TEST_SUITE_END();

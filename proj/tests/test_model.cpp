#include "pnet/error.hpp"
#include "pnet/network.hpp"
#include "pnet/rules.hpp"

#include "support/fixtures.hpp"

#include <doctest.h>

using namespace pnet;
using test::make_triangle;

TEST_SUITE_BEGIN("model");

TEST_CASE("fact value kinds compare only within a kind") {
    CHECK(value_exact_equal(FactValue{true}, FactValue{true}));
    CHECK_FALSE(value_exact_equal(FactValue{std::int64_t{2}}, FactValue{2.0}));
    CHECK_FALSE(value_exact_equal(FactValue{std::string("2")}, FactValue{std::int64_t{2}}));
}

TEST_CASE("real equality predicates use 1e-9 absolute tolerance") {
    Network net = make_triangle().network;
    net.containers.at("A").facts.set("load", FactValue{0.5});
    Predicate close{"load", PredOp::eq, FactValue{0.5 + 5e-10}};
    Predicate far{"load", PredOp::eq, FactValue{0.5 + 5e-8}};
    CHECK(eval_predicate(net, FactTarget::container("A"), close));
    CHECK_FALSE(eval_predicate(net, FactTarget::container("A"), far));
}

TEST_CASE("validate_network accepts the triangle fixture") {
    CHECK(validate_network(make_triangle().network).empty());
}

TEST_CASE("validate_network flags a dangling link endpoint") {
    Network net = make_triangle().network;
    net.links.at("L1").endpoint_b = "Z";
    auto violations = validate_network(net);
    REQUIRE(violations.size() == 1);
    CHECK(violations[0].entity == "L1");
    CHECK(violations[0].message.find("Z") != std::string::npos);
}

TEST_CASE("validate_network flags duplicate fact keys") {
    Network net = make_triangle().network;
    net.containers.at("B").facts.add(test::bool_fact("patched", true));
    auto violations = validate_network(net);
    REQUIRE(violations.size() == 1);
    CHECK(violations[0].entity.find("B") != std::string::npos);
    CHECK(violations[0].message.find("patched") != std::string::npos);
}

TEST_CASE("validate_network checks common property kind and key") {
    Network net = make_triangle().network;
    net.containers.at("B").facts.find_mut("patched")->value = FactValue{std::int64_t{1}};
    auto violations = validate_network(net);
    REQUIRE(violations.size() == 1);
    CHECK(violations[0].message.find("boolean") != std::string::npos);

    Network net2 = make_triangle().network;
    net2.containers.at("B").facts.find_mut("patched")->key = "patch-state";
    CHECK(validate_network(net2).size() == 1);
}

TEST_CASE("resolve_fact looks up by key then by common-property id") {
    Network net = make_triangle().network;
    auto direct = resolve_fact(net, FactTarget::container("B"), "patched");
    REQUIRE(direct.has_value());
    CHECK(*direct == FactValue{false});

    // canonical-key indirection through the registry id
    auto indirect = resolve_fact(net, FactTarget::link("L1"), "cp.protocol");
    REQUIRE(indirect.has_value());
    CHECK(*indirect == FactValue{std::string("ssh")});

    CHECK_FALSE(resolve_fact(net, FactTarget::container("B"), "nonexistent").has_value());
    CHECK_THROWS_AS(resolve_fact(net, FactTarget::container("Z"), "patched"), LookupError);
}

TEST_CASE("resolve_fact is pure") {
    Network net = make_triangle().network;
    std::string before = state_fingerprint(net);
    for (int i = 0; i < 3; ++i) {
        auto v = resolve_fact(net, FactTarget::container("B"), "patched");
        CHECK(*v == FactValue{false});
    }
    CHECK(state_fingerprint(net) == before);
}

TEST_CASE("apply_delta creates missing facts and leaves the input untouched") {
    Network net = make_triangle().network;
    FactDelta delta{FactTarget::container("B"), "compromised", std::nullopt, FactValue{true}};
    Network next = apply_delta(net, delta);
    CHECK_FALSE(net.containers.at("B").facts.find("compromised"));
    const Fact* f = next.containers.at("B").facts.find("compromised");
    REQUIRE(f);
    CHECK(f->value == FactValue{true});
    CHECK(diff_state(net, next).size() == 1);
}

TEST_CASE("apply_delta then its inverse restores the exact state") {
    Network net = make_triangle().network;
    FactDelta delta{FactTarget::global(), "alert_level", std::nullopt, FactValue{std::int64_t{2}}};
    Network modified = apply_delta(net, delta);
    Network restored = apply_delta(modified, delta.inverse());
    CHECK(state_fingerprint(restored) == state_fingerprint(net));
    CHECK(diff_state(net, restored).empty());
}

TEST_CASE("apply_delta rejects unknown targets") {
    Network net = make_triangle().network;
    FactDelta delta{FactTarget::container("Z"), "x", std::nullopt, FactValue{true}};
    CHECK_THROWS_WITH_AS(apply_delta(net, delta), doctest::Contains("Z"), LookupError);
}

TEST_CASE("diff_state identity and single difference") {
    Network net = make_triangle().network;
    CHECK(diff_state(net, net).empty());

    Network other = net;
    other.containers.at("B").facts.set("patched", FactValue{true});
    auto deltas = diff_state(net, other);
    REQUIRE(deltas.size() == 1);
    CHECK(deltas[0].target == FactTarget::container("B"));
    CHECK(deltas[0].key == "patched");
    CHECK(*deltas[0].old_value == FactValue{false});
    CHECK(*deltas[0].new_value == FactValue{true});
}

TEST_CASE("diff_state refuses structural mismatches") {
    Network a = make_triangle().network;
    Network b = a;
    b.links.erase("L3");
    CHECK_THROWS_WITH_AS(diff_state(a, b), doctest::Contains("L3"), StructureError);
}

TEST_CASE("diff_state ordering is containers, links, global, keys sorted") {
    Network a = make_triangle().network;
    Network b = a;
    b.global_facts.set("alert", FactValue{true});
    b.containers.at("C").facts.set("patched", FactValue{false});
    b.containers.at("A").facts.set("compromised", FactValue{false});
    b.links.at("L2").facts.set("protocol", FactValue{std::string("vnc")});
    auto deltas = diff_state(a, b);
    REQUIRE(deltas.size() == 4);
    CHECK(deltas[0].target == FactTarget::container("A"));
    CHECK(deltas[1].target == FactTarget::container("C"));
    CHECK(deltas[2].target == FactTarget::link("L2"));
    CHECK(deltas[3].target == FactTarget::global());
}

// Round-trip oracle: random fact flips on the triangle, then
// apply(diff(a, b)) must land exactly on b.
TEST_CASE("diff then apply round-trips 100 random mutations") {
    test::Rng rng(20240817);
    const std::vector<std::string> containers{"A", "B", "C"};
    const std::vector<std::string> keys{"patched", "compromised", "agent", "level"};
    for (int trial = 0; trial < 100; ++trial) {
        Network a = make_triangle().network;
        Network b = a;
        int flips = static_cast<int>(rng.range(1, 6));
        for (int i = 0; i < flips; ++i) {
            auto& store = b.containers.at(rng.pick(containers)).facts;
            const std::string& key = rng.pick(keys);
            switch (rng.range(0, 2)) {
                case 0: store.set(key, FactValue{rng.chance(0.5)}); break;
                case 1: store.set(key, FactValue{rng.range(0, 9)}); break;
                default: store.erase(key); break;
            }
        }
        if (rng.chance(0.3)) b.global_facts.set("alert_level", FactValue{rng.range(0, 3)});

        Network rebuilt = apply_deltas(a, diff_state(a, b));
        CHECK(state_fingerprint(rebuilt) == state_fingerprint(b));
    }
}

TEST_SUITE_END();

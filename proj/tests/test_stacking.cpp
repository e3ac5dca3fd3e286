#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <random>

#include "lsmsim/stacking.hpp"

using namespace lsmsim;

namespace {

DecisionRuleSet demo_rules() {
    DecisionRuleSet rules;
    rules["A"] = {"A", false, {"1", "2", "3"}, {}};
    rules["B"] = {"B", false, {"2", "3", "4"}, {}};
    rules["C"] = {"C", false, {"2"}, {}};
    return rules;
}

std::vector<AccessRequest> demo_requests() {
    std::vector<AccessRequest> requests;
    for (const std::string object : {"1", "2", "3", "4"}) {
        requests.push_back({0, object, AccessOp::open});
    }
    return requests;
}

}  // namespace

TEST_CASE("whitelist stacking order changes cost but not the outcome") {
    const auto rules = demo_rules();
    const auto requests = demo_requests();

    const auto abc = evaluate_stack(requests, {"A", "B", "C"}, rules);
    CHECK(abc.checks_per_module.at("A") == 4);
    CHECK(abc.checks_per_module.at("B") == 3);
    CHECK(abc.checks_per_module.at("C") == 2);
    CHECK(abc.total_cost_units == 9);
    CHECK(abc.granted_objects() == std::vector<std::string>{"2"});
    CHECK(abc.decisions.at("1").denied_by == "B");
    CHECK(abc.decisions.at("4").denied_by == "A");

    const auto cab = evaluate_stack(requests, {"C", "A", "B"}, rules);
    CHECK(cab.checks_per_module.at("C") == 4);
    CHECK(cab.checks_per_module.at("A") == 1);
    CHECK(cab.checks_per_module.at("B") == 1);
    CHECK(cab.total_cost_units == 6);
    CHECK(cab.granted_objects() == std::vector<std::string>{"2"});
    CHECK(abc.total_cost_units - cab.total_cost_units == 3);
}

TEST_CASE("granted set is identical under every permutation") {
    const auto rules = demo_rules();
    const auto requests = demo_requests();
    std::vector<std::string> order = {"A", "B", "C"};
    std::sort(order.begin(), order.end());
    do {
        CHECK(evaluate_stack(requests, order, rules).granted_objects() ==
              std::vector<std::string>{"2"});
    } while (std::next_permutation(order.begin(), order.end()));
}

TEST_CASE("empty stack grants everything at zero cost") {
    const auto report = evaluate_stack(demo_requests(), {}, {});
    CHECK(report.total_cost_units == 0);
    CHECK(report.granted_objects().size() == 4);
}

TEST_CASE("missing rules for a stacked module is an error") {
    CHECK_THROWS_AS(evaluate_stack(demo_requests(), {"A", "Z"}, demo_rules()),
                    ValidationError);
}

TEST_CASE("check counts are nonincreasing along the stack and bounded") {
    std::mt19937_64 gen(11);
    std::uniform_int_distribution<int> coin(0, 1);
    for (int round = 0; round < 50; ++round) {
        DecisionRuleSet rules;
        std::vector<std::string> order;
        for (const std::string module : {"m0", "m1", "m2", "m3"}) {
            ModuleRules r;
            r.module = module;
            for (int object = 0; object < 12; ++object) {
                if (coin(gen)) {
                    r.allow.insert(std::to_string(object));
                }
            }
            rules[module] = r;
            order.push_back(module);
        }
        std::vector<AccessRequest> requests;
        for (int object = 0; object < 12; ++object) {
            requests.push_back({0, std::to_string(object), AccessOp::read});
        }
        const auto report = evaluate_stack(requests, order, rules);
        std::int64_t previous = static_cast<std::int64_t>(requests.size());
        CHECK(report.checks_per_module.at(order.front()) == previous);
        for (const auto& module : order) {
            const auto checks = report.checks_per_module.at(module);
            CHECK(checks <= previous);
            previous = checks;
        }
        CHECK(report.total_cost_units <=
              static_cast<std::int64_t>(requests.size() * order.size()));
    }
}

TEST_CASE("cost bound is tight iff every module allows everything") {
    DecisionRuleSet rules;
    rules["a"] = {"a", true, {}, {}};
    rules["b"] = {"b", true, {}, {}};
    const auto requests = demo_requests();
    const auto report = evaluate_stack(requests, {"a", "b"}, rules);
    CHECK(report.total_cost_units == 8);
}

TEST_CASE("brute force: the most restrictive module leads every optimal order here") {
    const auto rules = demo_rules();
    const auto requests = demo_requests();
    std::vector<std::string> order = {"A", "B", "C"};
    std::sort(order.begin(), order.end());
    std::int64_t best = -1;
    std::vector<std::vector<std::string>> best_orders;
    do {
        const auto cost = evaluate_stack(requests, order, rules).total_cost_units;
        if (best < 0 || cost < best) {
            best = cost;
            best_orders = {order};
        } else if (cost == best) {
            best_orders.push_back(order);
        }
    } while (std::next_permutation(order.begin(), order.end()));
    CHECK(best == 6);
    for (const auto& winner : best_orders) {
        CHECK(winner.front() == "C");
    }
}

TEST_CASE("decision cache collapses repeated requests") {
    DecisionRuleSet rules;
    rules["selinux"] = {"selinux", false, {"f"}, {}};
    const std::vector<AccessRequest> one = {{0, "f", AccessOp::read}};

    StackOptions options;
    options.cache = CacheConfig{512};
    const auto report = cached_reevaluate(one, 300, {"selinux"}, rules, options);
    CHECK(report.checks_per_module.at("selinux") == 300);
    CHECK(report.cache_hits_per_module.at("selinux") == 299);
    CHECK(report.total_cost_units == 1);  // one non-cached check
}

TEST_CASE("sequential scans thrash an undersized LRU cache") {
    DecisionRuleSet rules;
    ModuleRules r;
    r.module = "m";
    r.default_allow = true;
    rules["m"] = r;

    std::vector<AccessRequest> requests;
    for (int i = 0; i < 600; ++i) {
        requests.push_back({0, "o" + std::to_string(i), AccessOp::read});
    }
    StackOptions options;
    options.cache = CacheConfig{512};
    const auto report = cached_reevaluate(requests, 2, {"m"}, rules, options);
    CHECK(report.cache_hits_per_module.at("m") == 0);
    CHECK(report.checks_per_module.at("m") == 1200);
    CHECK(report.total_cost_units == 1200);
}

TEST_CASE("disabled cache never hits") {
    DecisionRuleSet rules;
    rules["m"] = {"m", true, {}, {}};
    const std::vector<AccessRequest> one = {{0, "f", AccessOp::read}};
    const auto report = cached_reevaluate(one, 50, {"m"}, rules, {});
    CHECK(report.cache_hits_per_module.at("m") == 0);
    CHECK(report.total_cost_units == 50);
}

TEST_CASE("denials are cached unless disabled") {
    DecisionRuleSet rules;
    rules["m"] = {"m", false, {}, {}};  // denies everything
    const std::vector<AccessRequest> one = {{0, "f", AccessOp::read}};

    StackOptions caching;
    caching.cache = CacheConfig{8};
    CHECK(cached_reevaluate(one, 10, {"m"}, rules, caching).cache_hits_per_module.at("m") ==
          9);

    StackOptions no_deny_cache = caching;
    no_deny_cache.cache_denials = false;
    CHECK(cached_reevaluate(one, 10, {"m"}, rules, no_deny_cache)
              .cache_hits_per_module.at("m") == 0);
}

TEST_CASE("per-module cost overrides") {
    DecisionRuleSet rules;
    rules["light"] = {"light", true, {}, {}};
    rules["heavy"] = {"heavy", true, {}, {}};
    StackOptions options;
    options.cost_units["heavy"] = 7;
    const auto report =
        evaluate_stack(demo_requests(), {"light", "heavy"}, rules, options);
    CHECK(report.total_cost_units == 4 * 1 + 4 * 7);
}

TEST_CASE("rules documents load") {
    const auto rules = load_rules(R"({"module": "A", "default": "deny",
                                      "allow": ["1", "2"], "deny": ["3"]})");
    CHECK(rules.module == "A");
    CHECK(rules.decide("1"));
    CHECK_FALSE(rules.decide("3"));
    CHECK_FALSE(rules.decide("9"));
    CHECK_THROWS_AS(load_rules(R"({"module": "A", "default": "maybe"})"), ValidationError);
    CHECK_THROWS_AS(load_rules("nope"), ParseError);
}

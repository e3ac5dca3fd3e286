#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "lsmsim/syscall_model.hpp"
#include "test_support.hpp"

using namespace lsmsim;

namespace {

SyscallScenario single(const std::string& syscall, PathSpec path) {
    SyscallScenario scenario;
    scenario.name = syscall;
    scenario.label = syscall;
    scenario.syscalls = {{syscall, 1}};
    scenario.path = std::move(path);
    return scenario;
}

}  // namespace

TEST_CASE("open over AA under the tunable module fires two authorizations") {
    const auto scenario = testsup::load_scenario("open");
    const auto trace = build_trace(scenario, testsup::tunable_stack());
    CHECK(trace.authorization_count == 2);

    const auto histogram = invocation_histogram(trace);
    CHECK(histogram.size() == 2);
    CHECK(histogram.at("security_inode_permission") + histogram.at("security_file_permission") ==
          2);
    CHECK(histogram.at("security_inode_permission") == 1);
    CHECK(histogram.at("security_file_permission") == 1);
}

TEST_CASE("stat over AA/BB/CC/DD fires four authorizations") {
    const auto scenario = testsup::load_scenario("stat_d4");
    const auto trace = build_trace(scenario, testsup::tunable_stack());
    CHECK(trace.authorization_count == 4);
}

TEST_CASE("close fires nothing") {
    const auto stack = testsup::tunable_stack();
    const auto trace = build_syscall_trace("close", make_depth_path(3), stack);
    CHECK(trace.entries.empty());
    CHECK(trace.authorization_count == 0);
}

TEST_CASE("depth linearity for open and stat") {
    const auto stack = testsup::tunable_stack();
    for (std::int64_t d = 1; d <= 8; ++d) {
        CHECK(build_syscall_trace("open", make_depth_path(d), stack).authorization_count ==
              d + 1);
        CHECK(build_syscall_trace("stat", make_depth_path(d), stack).authorization_count == d);
    }
}

TEST_CASE("path-insensitive syscalls under the tunable module") {
    const auto stack = testsup::tunable_stack();
    for (const std::string syscall : {"openat", "rename", "creat", "unlink", "symlink",
                                      "chmod"}) {
        CAPTURE(syscall);
        const auto at_depth1 =
            build_syscall_trace(syscall, make_depth_path(1), stack).authorization_count;
        for (std::int64_t d = 2; d <= 8; ++d) {
            CHECK(build_syscall_trace(syscall, make_depth_path(d), stack).authorization_count ==
                  at_depth1);
        }
    }
}

TEST_CASE("dot components count as components") {
    PathSpec dotted;
    dotted.components = {"XX", "YY", ".", ".", "AA", "BB", ".", ".", "HH"};
    const auto stack = testsup::tunable_stack();
    CHECK(dotted.depth() == 9);
    CHECK(build_syscall_trace("open", dotted, stack).authorization_count == 10);
    CHECK(build_syscall_trace("stat", dotted, stack).authorization_count == 9);
}

TEST_CASE("link and missing-path semantics") {
    const auto stack = testsup::tunable_stack();

    SUBCASE("hard links resolve with their literal component count") {
        const auto trace =
            build_syscall_trace("open", make_depth_path(3, PathKind::hard_link), stack);
        CHECK(trace.authorization_count == 4);
    }
    SUBCASE("soft links re-check the link target inode") {
        CHECK(build_syscall_trace("open", make_depth_path(3, PathKind::soft_link), stack)
                  .authorization_count == 5);
        CHECK(build_syscall_trace("stat", make_depth_path(3, PathKind::soft_link), stack)
                  .authorization_count == 4);
    }
    SUBCASE("nonexistent paths fire checks for the resolved prefix only") {
        const auto trace =
            build_syscall_trace("open", make_depth_path(3, PathKind::nonexistent), stack);
        CHECK(trace.authorization_count == 2);
        for (const auto& entry : trace.entries) {
            CHECK(entry.hook_id == "security_inode_permission");
        }
    }
}

TEST_CASE("empty-dir-hooks switch silences mkdir and rmdir") {
    const auto stack = testsup::tunable_stack();
    BuildTraceOptions options;
    options.empty_dir_hooks = true;
    CHECK(build_syscall_trace("mkdir", make_depth_path(2), stack).authorization_count == 2);
    CHECK(build_syscall_trace("mkdir", make_depth_path(2), stack, options).entries.empty());
    CHECK(build_syscall_trace("rmdir", make_depth_path(2), stack, options).entries.empty());
}

TEST_CASE("unknown syscall is rejected") {
    const auto stack = testsup::tunable_stack();
    CHECK_THROWS_AS(build_syscall_trace("mount", make_depth_path(1), stack), ValidationError);
}

TEST_CASE("trace determinism") {
    const auto scenario = testsup::load_scenario("copy");
    const auto stack = testsup::tunable_stack();
    const auto a = build_trace(scenario, stack);
    const auto b = build_trace(scenario, stack);
    REQUIRE(a.entries.size() == b.entries.size());
    for (std::size_t i = 0; i < a.entries.size(); ++i) {
        CHECK(a.entries[i].hook_id == b.entries[i].hook_id);
        CHECK(a.entries[i].syscall == b.entries[i].syscall);
        CHECK(a.entries[i].module == b.entries[i].module);
    }
    CHECK(a.authorization_count == b.authorization_count);
}

TEST_CASE("histogram counts sum to the trace size") {
    const auto scenario = testsup::load_scenario("read");
    const auto trace = build_trace(scenario, testsup::tunable_stack());
    std::int64_t total = 0;
    for (const auto& [hook, count] : invocation_histogram(trace)) {
        total += count;
    }
    CHECK(total == static_cast<std::int64_t>(trace.entries.size()));
}

TEST_CASE("file_permission dominates the read benchmark under selinux") {
    // Oracle: at depth 1 the open phase fires 6 inode_permission + 6
    // file_open, the 1000 reads fire file_permission once each and close
    // fires nothing, so the share is exactly 1000/1012.
    const auto scenario = testsup::load_scenario("read");
    const std::vector<SecurityModuleSpec> stack = {testsup::load_module("selinux")};
    const auto histogram = invocation_histogram(build_trace(scenario, stack));
    CHECK(histogram.at("security_file_permission") == 1000);
    CHECK(histogram.at("security_inode_permission") == 6);
    CHECK(histogram.at("security_file_open") == 6);

    const auto [hook, share] = dominant_hook_share(histogram);
    CHECK(hook == "security_file_permission");
    CHECK(share == doctest::Approx(1000.0 / 1012.0).epsilon(1e-12));
}

TEST_CASE("inode-category hooks account for all stat firings under selinux") {
    const auto scenario = testsup::load_scenario("stat_d4");
    const std::vector<SecurityModuleSpec> stack = {testsup::load_module("selinux")};
    const auto trace = build_trace(scenario, stack);
    REQUIRE(!trace.entries.empty());
    std::int64_t inode_firings = 0;
    for (const auto& entry : trace.entries) {
        if (stack[0].find_hook(entry.hook_id)->category == SsoCategory::inode) {
            ++inode_firings;
        }
    }
    const double share =
        static_cast<double>(inode_firings) / static_cast<double>(trace.entries.size());
    CHECK(share >= 0.99);
}

TEST_CASE("dominant_hook_share arithmetic and tie breaking") {
    CHECK(dominant_hook_share({{"a", 99}, {"b", 1}}) ==
          std::pair<std::string, double>{"a", 0.99});
    CHECK(dominant_hook_share({{"a", 1}}) == std::pair<std::string, double>{"a", 1.0});
    CHECK(dominant_hook_share({{"b", 5}, {"a", 5}}).first == "a");
    CHECK_THROWS_AS(dominant_hook_share({}), ValidationError);
}

TEST_CASE("scenario loader validates the catalog") {
    CHECK_THROWS_AS(load_scenario(R"({
        "name": "open", "syscalls": ["open"],
        "path": {"components": ["AA"]}
    })"),
                    ValidationError);
    CHECK_THROWS_AS(load_scenario(R"({
        "name": "opens", "syscalls": ["open", "close"],
        "path": {"components": ["AA"]}
    })"),
                    ValidationError);
    CHECK_THROWS_AS(load_scenario(R"({
        "name": "open", "syscalls": ["open", "close"],
        "path": {"components": []}
    })"),
                    ValidationError);
    CHECK_THROWS_AS(load_scenario(R"({
        "name": "read",
        "syscalls": ["open", "read", "close"],
        "path": {"components": ["AA"]},
        "buffer_size": 512
    })"),
                    ValidationError);
    const auto scenario = load_scenario(R"({
        "name": "read",
        "syscalls": ["open", {"name": "read", "count": 4}, "close"],
        "path": {"components": ["AA"]},
        "buffer_size": 4096
    })");
    CHECK(scenario.benchmark_class == "Read Write");
    CHECK(scenario.syscalls[1].count == 4);
}

TEST_CASE("14-benchmark catalog is bundled and loads") {
    for (const auto& name : benchmark_names()) {
        CAPTURE(name);
        const auto scenario = testsup::load_scenario(name);
        CHECK(scenario.name == name);
    }
    CHECK(benchmark_names().size() == 14);
}

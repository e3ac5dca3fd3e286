#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "lsmsim/hook_model.hpp"

namespace lsmsim {

enum class PathKind {
    plain,
    hard_link,
    soft_link,
    nonexistent,
};

PathKind path_kind_from_string(std::string_view name);
std::string_view to_string(PathKind kind);

/// A synthetic lookup path. "." components count as components.
struct PathSpec {
    std::vector<std::string> components;
    PathKind kind = PathKind::plain;

    std::int64_t depth() const { return static_cast<std::int64_t>(components.size()); }
};

/// Components AA, BB, CC, ... for a given depth.
PathSpec make_depth_path(std::int64_t depth, PathKind kind = PathKind::plain);

/// One syscall in a benchmark sequence, executed `count` times in a row.
struct SyscallStep {
    std::string syscall;
    std::int64_t count = 1;
};

/// A benchmark: ordered syscall sequence plus path parameters.
struct SyscallScenario {
    std::string name;             // one of the 14 benchmark names
    std::string label;            // output label; defaults to name
    std::string benchmark_class;  // File Ops, Dir Ops, Link Ops, Attr Ops, Read Write
    std::vector<SyscallStep> syscalls;
    PathSpec path;
    std::int64_t buffer_size_bytes = 0;
};

/// Benchmarks whose headline metric is operations per second.
bool is_throughput_benchmark(std::string_view name);

/// The 14 benchmark names in catalog order.
const std::vector<std::string>& benchmark_names();

/// Loads and validates a scenario document (JSON text). A scenario whose
/// name is one of the 14 benchmarks must carry that benchmark's syscall
/// sequence and class.
SyscallScenario load_scenario(const std::string& scenario_json);
SyscallScenario load_scenario_file(const std::string& path);

struct TraceEntry {
    std::string syscall;
    std::string hook_id;
    std::string module;
    bool is_authorization = false;
    double cost_ns = 0.0;
};

/// Ordered hook firings produced by running a scenario against a stack.
struct HookInvocationTrace {
    std::vector<TraceEntry> entries;
    std::int64_t authorization_count = 0;
    /// Sum of per-firing costs, captured from the module specs at build time.
    double total_hook_cost_ns = 0.0;
    /// buffer_size_bytes summed over data-transfer syscall executions.
    std::int64_t transfer_bytes = 0;
};

struct BuildTraceOptions {
    /// Drop mkdir/rmdir placements (reproduces the observation that those
    /// syscalls trigger no hooks on the measured kernel).
    bool empty_dir_hooks = false;
};

/// Executes a scenario against an ordered module stack and returns the
/// ordered trace of hook firings.
///
/// Firing order per syscall: per-component hooks fire once per resolved
/// component (stack order, then descriptor order within a module), then the
/// soft-link target re-check if any, then per-syscall constant hooks.
/// Nonexistent paths resolve depth-1 components and never reach the
/// constant-hook phase; hard links resolve with their literal component
/// count; soft links add one extra authorization firing for the link's own
/// inode.
HookInvocationTrace build_trace(const SyscallScenario& scenario,
                                const std::vector<SecurityModuleSpec>& stack,
                                const BuildTraceOptions& options = {});

/// Trace of a single syscall execution over a path (helper for per-syscall
/// analyses; equivalent to a one-step scenario).
HookInvocationTrace build_syscall_trace(const std::string& syscall, const PathSpec& path,
                                        const std::vector<SecurityModuleSpec>& stack,
                                        const BuildTraceOptions& options = {});

/// hook id -> firing count; counts sum to |entries|.
std::map<std::string, std::int64_t> invocation_histogram(const HookInvocationTrace& trace);

/// Max-count hook and its share of all firings; ties broken by
/// lexicographic hook id. Throws on an empty histogram.
std::pair<std::string, double> dominant_hook_share(
    const std::map<std::string, std::int64_t>& histogram);

}  // namespace lsmsim

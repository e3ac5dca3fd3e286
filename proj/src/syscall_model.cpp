#include "lsmsim/syscall_model.hpp"

#include <algorithm>
#include <array>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "lsmsim/errors.hpp"

namespace lsmsim {

namespace {

using nlohmann::json;

struct BenchmarkDef {
    std::string_view name;
    std::vector<std::string_view> sequence;
    std::string_view cls;
};

const std::vector<BenchmarkDef>& benchmark_catalog() {
    static const std::vector<BenchmarkDef> catalog = {
        {"open", {"open", "close"}, "File Ops"},
        {"openat", {"openat", "close"}, "File Ops"},
        {"rename", {"rename"}, "File Ops"},
        {"creat", {"rename", "creat", "close"}, "File Ops"},
        {"mkdir", {"mkdir"}, "Dir Ops"},
        {"rmdir", {"rmdir"}, "Dir Ops"},
        {"unlink", {"open", "unlink", "close"}, "Link Ops"},
        {"symlink", {"symlink", "unlink"}, "Link Ops"},
        {"chmod", {"chmod"}, "Attr Ops"},
        {"stat", {"stat"}, "Attr Ops"},
        {"fstatat", {"fstatat"}, "Attr Ops"},
        {"read", {"open", "read", "close"}, "Read Write"},
        {"write", {"open", "write", "close"}, "Read Write"},
        {"copy", {"open", "open", "read", "write", "close", "close"}, "Read Write"},
    };
    return catalog;
}

const std::set<std::string_view>& known_syscalls() {
    static const std::set<std::string_view> syscalls = {
        "open",  "openat", "close",  "creat",  "rename", "sendfile", "read",    "write",
        "mkdir", "rmdir",  "symlink", "unlink", "chmod",  "fchmod",   "stat",    "fstatat",
    };
    return syscalls;
}

bool transfers_data(std::string_view syscall) {
    return syscall == "read" || syscall == "write" || syscall == "sendfile";
}

const BenchmarkDef* find_benchmark(std::string_view name) {
    for (const auto& def : benchmark_catalog()) {
        if (def.name == name) {
            return &def;
        }
    }
    return nullptr;
}

}  // namespace

PathKind path_kind_from_string(std::string_view name) {
    if (name == "plain") return PathKind::plain;
    if (name == "hard_link") return PathKind::hard_link;
    if (name == "soft_link") return PathKind::soft_link;
    if (name == "nonexistent") return PathKind::nonexistent;
    throw ValidationError("unknown path kind: " + std::string(name));
}

std::string_view to_string(PathKind kind) {
    switch (kind) {
        case PathKind::plain: return "plain";
        case PathKind::hard_link: return "hard_link";
        case PathKind::soft_link: return "soft_link";
        case PathKind::nonexistent: return "nonexistent";
    }
    return "plain";
}

PathSpec make_depth_path(std::int64_t depth, PathKind kind) {
    if (depth < 0) {
        throw ValidationError("path depth must be nonnegative");
    }
    PathSpec path;
    path.kind = kind;
    for (std::int64_t i = 0; i < depth; ++i) {
        const char c = static_cast<char>('A' + (i % 26));
        path.components.push_back(std::string(2, c));
    }
    return path;
}

bool is_throughput_benchmark(std::string_view name) {
    return name == "mkdir" || name == "rmdir" || name == "read" || name == "write" ||
           name == "copy";
}

const std::vector<std::string>& benchmark_names() {
    static const std::vector<std::string> names = [] {
        std::vector<std::string> out;
        for (const auto& def : benchmark_catalog()) {
            out.emplace_back(def.name);
        }
        return out;
    }();
    return names;
}

SyscallScenario load_scenario(const std::string& scenario_json) {
    json doc = json::parse(scenario_json, nullptr, false);
    if (doc.is_discarded()) {
        throw ParseError("malformed scenario document");
    }
    if (!doc.is_object() || !doc.contains("name") || !doc.contains("syscalls")) {
        throw ParseError("scenario needs \"name\" and \"syscalls\" fields");
    }

    SyscallScenario scenario;
    scenario.name = doc["name"].get<std::string>();
    scenario.label = doc.value("label", scenario.name);
    scenario.benchmark_class = doc.value("class", std::string{});

    for (const auto& step : doc["syscalls"]) {
        SyscallStep s;
        if (step.is_string()) {
            s.syscall = step.get<std::string>();
        } else if (step.is_object() && step.contains("name")) {
            s.syscall = step["name"].get<std::string>();
            s.count = step.value("count", std::int64_t{1});
        } else {
            throw ParseError("syscall entries must be names or {name, count} objects");
        }
        if (s.count < 1) {
            throw ValidationError("syscall count must be >= 1");
        }
        if (!known_syscalls().count(s.syscall)) {
            throw ValidationError("unknown syscall name: " + s.syscall);
        }
        scenario.syscalls.push_back(std::move(s));
    }

    if (doc.contains("path")) {
        const auto& p = doc["path"];
        if (p.contains("components")) {
            for (const auto& c : p["components"]) {
                scenario.path.components.push_back(c.get<std::string>());
            }
        }
        scenario.path.kind = path_kind_from_string(p.value("kind", "plain"));
    }
    scenario.buffer_size_bytes = doc.value("buffer_size", std::int64_t{0});

    // Catalog conformance for the 14 benchmark names.
    const BenchmarkDef* def = find_benchmark(scenario.name);
    if (def == nullptr) {
        throw ValidationError("unknown benchmark name: " + scenario.name);
    }
    if (scenario.syscalls.size() != def->sequence.size() ||
        !std::equal(scenario.syscalls.begin(), scenario.syscalls.end(), def->sequence.begin(),
                    [](const SyscallStep& s, std::string_view n) { return s.syscall == n; })) {
        throw ValidationError("scenario " + scenario.name +
                              ": syscall sequence does not match the benchmark catalog");
    }
    if (!scenario.benchmark_class.empty() && scenario.benchmark_class != def->cls) {
        throw ValidationError("scenario " + scenario.name + ": class must be " +
                              std::string(def->cls));
    }
    scenario.benchmark_class = std::string(def->cls);

    if (scenario.path.components.empty()) {
        throw ValidationError("scenario " + scenario.name + ": path must be nonempty");
    }
    if (scenario.benchmark_class == "Read Write") {
        const auto b = scenario.buffer_size_bytes;
        if (b != 0 && b != 1024 && b != 2048 && b != 4096) {
            throw ValidationError("Read Write buffer size must be one of 0/1024/2048/4096");
        }
    } else if (scenario.buffer_size_bytes != 0) {
        throw ValidationError("buffer_size applies to Read Write benchmarks only");
    }
    return scenario;
}

SyscallScenario load_scenario_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ParseError("cannot open scenario: " + path);
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return load_scenario(buffer.str());
}

namespace {

class TraceBuilder {
public:
    TraceBuilder(const std::vector<SecurityModuleSpec>& stack, const BuildTraceOptions& options)
        : stack_(stack), options_(options) {}

    void emit_syscall(const std::string& syscall, const PathSpec& path,
                      std::int64_t buffer_bytes) {
        if (!known_syscalls().count(syscall)) {
            throw ValidationError("unknown syscall name: " + syscall);
        }
        if (options_.empty_dir_hooks && (syscall == "mkdir" || syscall == "rmdir")) {
            return;
        }
        const std::int64_t depth = path.depth();
        const bool truncated = path.kind == PathKind::nonexistent;
        const std::int64_t walked = truncated ? std::max<std::int64_t>(depth - 1, 0) : depth;

        // Component walk: each per-depth hook fires per_depth times per
        // resolved component, stack order then descriptor order.
        for (std::int64_t c = 0; c < walked; ++c) {
            for (const auto& module : stack_) {
                const auto* entries = module.placements_for(syscall);
                if (entries == nullptr) continue;
                for (const auto& entry : *entries) {
                    for (std::int64_t i = 0; i < entry.formula.per_depth; ++i) {
                        fire(syscall, module, entry.hook_id);
                    }
                }
            }
        }

        // A symlink is a file with its own inode: one extra authorization
        // check of the link target for modules that walk components.
        if (path.kind == PathKind::soft_link) {
            for (const auto& module : stack_) {
                const auto* entries = module.placements_for(syscall);
                if (entries == nullptr) continue;
                for (const auto& entry : *entries) {
                    if (entry.formula.per_depth > 0 &&
                        entry.hook_id == kInodePermissionHook) {
                        fire(syscall, module, entry.hook_id);
                        break;
                    }
                }
            }
        }

        // Constant hooks fire only when resolution reaches the target.
        if (!truncated) {
            for (const auto& module : stack_) {
                const auto* entries = module.placements_for(syscall);
                if (entries == nullptr) continue;
                for (const auto& entry : *entries) {
                    for (std::int64_t i = 0; i < entry.formula.constant; ++i) {
                        fire(syscall, module, entry.hook_id);
                    }
                }
            }
            if (transfers_data(syscall)) {
                trace_.transfer_bytes += buffer_bytes;
            }
        }
    }

    HookInvocationTrace take() { return std::move(trace_); }

private:
    void fire(const std::string& syscall, const SecurityModuleSpec& module,
              const std::string& hook_id) {
        const HookPoint* hook = module.find_hook(hook_id);
        TraceEntry entry;
        entry.syscall = syscall;
        entry.hook_id = hook_id;
        entry.module = module.name;
        entry.is_authorization = hook != nullptr && hook->is_authorization;
        entry.cost_ns = module.hook_cost_ns(hook_id);
        if (entry.is_authorization) {
            ++trace_.authorization_count;
        }
        trace_.total_hook_cost_ns += entry.cost_ns;
        trace_.entries.push_back(std::move(entry));
    }

    const std::vector<SecurityModuleSpec>& stack_;
    BuildTraceOptions options_;
    HookInvocationTrace trace_;
};

}  // namespace

HookInvocationTrace build_trace(const SyscallScenario& scenario,
                                const std::vector<SecurityModuleSpec>& stack,
                                const BuildTraceOptions& options) {
    TraceBuilder builder(stack, options);
    for (const auto& step : scenario.syscalls) {
        for (std::int64_t i = 0; i < step.count; ++i) {
            builder.emit_syscall(step.syscall, scenario.path, scenario.buffer_size_bytes);
        }
    }
    return builder.take();
}

HookInvocationTrace build_syscall_trace(const std::string& syscall, const PathSpec& path,
                                        const std::vector<SecurityModuleSpec>& stack,
                                        const BuildTraceOptions& options) {
    TraceBuilder builder(stack, options);
    builder.emit_syscall(syscall, path, 0);
    return builder.take();
}

std::map<std::string, std::int64_t> invocation_histogram(const HookInvocationTrace& trace) {
    std::map<std::string, std::int64_t> histogram;
    for (const auto& entry : trace.entries) {
        ++histogram[entry.hook_id];
    }
    return histogram;
}

std::pair<std::string, double> dominant_hook_share(
    const std::map<std::string, std::int64_t>& histogram) {
    if (histogram.empty()) {
        throw ValidationError("dominant_hook_share: empty histogram");
    }
    std::int64_t total = 0;
    const std::string* best = nullptr;
    std::int64_t best_count = -1;
    for (const auto& [hook, count] : histogram) {
        total += count;
        // std::map iterates in lexicographic key order, so strict > keeps
        // the lexicographically smallest id on ties.
        if (count > best_count) {
            best = &hook;
            best_count = count;
        }
    }
    if (total <= 0) {
        throw ValidationError("dominant_hook_share: histogram has no firings");
    }
    return {*best, static_cast<double>(best_count) / static_cast<double>(total)};
}

}  // namespace lsmsim

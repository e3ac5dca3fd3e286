#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "lsmsim/errors.hpp"

namespace lsmsim {

/// Kernel object class guarded by a hook. The first fourteen values mirror
/// the per-module placement breakdown; `other` holds hooks a module
/// implements on objects outside that breakdown (sockets, IPC, keys, ...),
/// so that a descriptor's category cells and its total hook count can both
/// be validated.
enum class SsoCategory {
    inode,
    dentry,
    file,
    superblock,
    mmap,
    path,
    bprm,
    task,
    proc,
    ptrace,
    cap,
    seclabel,
    cred,
    audit,
    other,
};

SsoCategory sso_category_from_string(std::string_view name);
std::string_view to_string(SsoCategory category);

/// Categories that count toward a module's "file accessing" hook total.
bool is_file_accessing(SsoCategory category);

/// The two policy-enforcement interfaces; every other hook is plumbing.
inline constexpr std::string_view kInodePermissionHook = "security_inode_permission";
inline constexpr std::string_view kFilePermissionHook = "security_file_permission";

inline bool is_authorization_interface(std::string_view hook_id) {
    return hook_id == kInodePermissionHook || hook_id == kFilePermissionHook;
}

/// One interposition point a module implements.
struct HookPoint {
    std::string id;
    SsoCategory category = SsoCategory::other;
    bool is_authorization = false;
};

/// Hook firings per syscall as an affine function of directory depth:
/// per_depth * depth + constant.
struct PlacementFormula {
    std::int64_t per_depth = 0;
    std::int64_t constant = 0;

    friend bool operator==(const PlacementFormula&, const PlacementFormula&) = default;
};

/// Evaluates a placement formula at the given depth. Throws on negative depth.
std::int64_t eval_placement(const PlacementFormula& formula, std::int64_t depth);

/// Bounded decision cache configuration (LRU over (subject, object, op) keys).
struct CacheConfig {
    std::size_t max_entries = 512;
};

struct PlacementEntry {
    std::string hook_id;
    PlacementFormula formula;
};

/// A security module as data: its hook set, per-syscall placement formulas,
/// per-hook cost proxies and optional decision-cache configuration.
/// Immutable after load; safe to share across concurrent runs.
class SecurityModuleSpec {
public:
    std::string name;
    std::vector<HookPoint> hooks;
    /// syscall name -> placements in descriptor order.
    std::map<std::string, std::vector<PlacementEntry>> placements;
    /// Per-hook cost override in nanoseconds; hooks not listed fall back to
    /// default_hook_cost_ns ("*" in the descriptor).
    std::map<std::string, double> per_hook_cost_ns;
    double default_hook_cost_ns = 0.0;
    std::optional<CacheConfig> cache;
    /// Declared per-category totals, validated against the hook set.
    std::map<SsoCategory, std::int64_t> declared_counts_by_category;
    std::optional<std::int64_t> declared_total_file_accessing;

    const HookPoint* find_hook(std::string_view hook_id) const;
    const std::vector<PlacementEntry>* placements_for(std::string_view syscall) const;
    double hook_cost_ns(std::string_view hook_id) const;
    std::size_t total_hooks() const { return hooks.size(); }
    std::int64_t file_accessing_hooks() const;
};

/// Count of hooks in `spec` whose category matches. Throws on a category
/// name that is not part of the model.
std::int64_t hook_count_by_category(const SecurityModuleSpec& spec, SsoCategory category);
std::int64_t hook_count_by_category(const SecurityModuleSpec& spec, std::string_view category);

/// Parses and validates a module descriptor document (JSON text).
///
/// Rejects placements that reference undeclared hooks, is_authorization
/// flags that disagree with the two policy-enforcement interface ids, and
/// declared category totals that do not match the hook set.
SecurityModuleSpec load_module_spec(const std::string& descriptor_json);

/// Same, reading the descriptor from a file.
SecurityModuleSpec load_module_spec_file(const std::string& path);

}  // namespace lsmsim

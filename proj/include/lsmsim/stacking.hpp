#pragma once

#include <cstdint>
#include <list>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "lsmsim/hook_model.hpp"

namespace lsmsim {

enum class AccessOp {
    read,
    write,
    exec,
    open,
    setattr,
    getattr,
};

AccessOp access_op_from_string(std::string_view name);
std::string_view to_string(AccessOp op);

struct AccessRequest {
    std::int64_t subject_label = 0;
    std::string object_id;
    AccessOp op = AccessOp::open;
};

/// One module's whitelist: explicit allow/deny sets over object ids plus a
/// default verdict for everything else.
struct ModuleRules {
    std::string module;
    bool default_allow = false;
    std::set<std::string> allow;
    std::set<std::string> deny;

    bool decide(const std::string& object_id) const;
};

/// module name -> rules.
using DecisionRuleSet = std::map<std::string, ModuleRules>;

ModuleRules load_rules(const std::string& rules_json);
ModuleRules load_rules_file(const std::string& path);

struct Decision {
    bool granted = false;
    std::string denied_by;  // first denying module when !granted
};

struct StackEvalReport {
    std::map<std::string, Decision> decisions;  // object id -> outcome
    std::map<std::string, std::int64_t> checks_per_module;
    std::map<std::string, std::int64_t> cache_hits_per_module;
    std::int64_t total_cost_units = 0;

    std::vector<std::string> granted_objects() const;
};

struct StackOptions {
    std::optional<CacheConfig> cache;  // per-module cache; absent = no caching
    bool cache_denials = true;
    /// Cost units per non-cached check; modules not listed cost 1.
    std::map<std::string, std::int64_t> cost_units;
};

/// Bounded LRU map from (subject, object, op) to a cached module decision.
class DecisionCache {
public:
    explicit DecisionCache(std::size_t max_entries) : max_entries_(max_entries) {}

    std::optional<bool> lookup(const std::string& key);
    void insert(const std::string& key, bool allowed);
    std::size_t size() const { return index_.size(); }

private:
    struct Slot {
        std::string key;
        bool allowed;
    };
    std::size_t max_entries_;
    std::list<Slot> lru_;  // front = most recent
    std::unordered_map<std::string, std::list<Slot>::iterator> index_;
};

/// Evaluates requests against a whitelist stack in order, short-circuiting
/// on the first deny. A cache hit still counts as a check but costs 0
/// units. Holds per-module caches across passes; must be externally
/// serialized per instance.
class StackEvaluator {
public:
    StackEvaluator(std::vector<std::string> stack_order, DecisionRuleSet rules,
                   StackOptions options = {});

    /// One pass over the requests; counts accumulate into the running report.
    void run_pass(const std::vector<AccessRequest>& requests);

    const StackEvalReport& report() const { return report_; }

private:
    std::vector<std::string> stack_;
    DecisionRuleSet rules_;
    StackOptions options_;
    std::map<std::string, DecisionCache> caches_;
    StackEvalReport report_;
};

/// Single-pass evaluation with fresh caches.
StackEvalReport evaluate_stack(const std::vector<AccessRequest>& requests,
                               const std::vector<std::string>& stack_order,
                               const DecisionRuleSet& rules, const StackOptions& options = {});

/// The request list replayed k times against one persistent set of caches.
StackEvalReport cached_reevaluate(const std::vector<AccessRequest>& requests, std::int64_t k,
                                  const std::vector<std::string>& stack_order,
                                  const DecisionRuleSet& rules, const StackOptions& options = {});

}  // namespace lsmsim

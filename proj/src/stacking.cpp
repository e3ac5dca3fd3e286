#include "lsmsim/stacking.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "lsmsim/errors.hpp"

namespace lsmsim {

namespace {
using nlohmann::json;

std::string cache_key(const AccessRequest& request) {
    std::string key;
    key += std::to_string(request.subject_label);
    key += '\x1f';
    key += request.object_id;
    key += '\x1f';
    key += to_string(request.op);
    return key;
}
}  // namespace

AccessOp access_op_from_string(std::string_view name) {
    if (name == "read") return AccessOp::read;
    if (name == "write") return AccessOp::write;
    if (name == "exec") return AccessOp::exec;
    if (name == "open") return AccessOp::open;
    if (name == "setattr") return AccessOp::setattr;
    if (name == "getattr") return AccessOp::getattr;
    throw ValidationError("unknown access operation: " + std::string(name));
}

std::string_view to_string(AccessOp op) {
    switch (op) {
        case AccessOp::read: return "read";
        case AccessOp::write: return "write";
        case AccessOp::exec: return "exec";
        case AccessOp::open: return "open";
        case AccessOp::setattr: return "setattr";
        case AccessOp::getattr: return "getattr";
    }
    return "open";
}

bool ModuleRules::decide(const std::string& object_id) const {
    if (deny.count(object_id)) return false;
    if (allow.count(object_id)) return true;
    return default_allow;
}

ModuleRules load_rules(const std::string& rules_json) {
    json doc = json::parse(rules_json, nullptr, false);
    if (doc.is_discarded()) {
        throw ParseError("malformed rules document");
    }
    if (!doc.is_object() || !doc.contains("module")) {
        throw ParseError("rules need a \"module\" field");
    }
    ModuleRules rules;
    rules.module = doc["module"].get<std::string>();
    const auto def = doc.value("default", "deny");
    if (def == "allow") {
        rules.default_allow = true;
    } else if (def == "deny") {
        rules.default_allow = false;
    } else {
        throw ValidationError("rules default must be allow or deny");
    }
    if (doc.contains("allow")) {
        for (const auto& id : doc["allow"]) rules.allow.insert(id.get<std::string>());
    }
    if (doc.contains("deny")) {
        for (const auto& id : doc["deny"]) rules.deny.insert(id.get<std::string>());
    }
    return rules;
}

ModuleRules load_rules_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ParseError("cannot open rules file: " + path);
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return load_rules(buffer.str());
}

std::vector<std::string> StackEvalReport::granted_objects() const {
    std::vector<std::string> granted;
    for (const auto& [object, decision] : decisions) {
        if (decision.granted) {
            granted.push_back(object);
        }
    }
    return granted;
}

std::optional<bool> DecisionCache::lookup(const std::string& key) {
    auto it = index_.find(key);
    if (it == index_.end()) {
        return std::nullopt;
    }
    lru_.splice(lru_.begin(), lru_, it->second);
    return it->second->allowed;
}

void DecisionCache::insert(const std::string& key, bool allowed) {
    auto it = index_.find(key);
    if (it != index_.end()) {
        it->second->allowed = allowed;
        lru_.splice(lru_.begin(), lru_, it->second);
        return;
    }
    if (index_.size() >= max_entries_ && !lru_.empty()) {
        index_.erase(lru_.back().key);
        lru_.pop_back();
    }
    lru_.push_front({key, allowed});
    index_[key] = lru_.begin();
}

StackEvaluator::StackEvaluator(std::vector<std::string> stack_order, DecisionRuleSet rules,
                               StackOptions options)
    : stack_(std::move(stack_order)), rules_(std::move(rules)), options_(std::move(options)) {
    for (const auto& module : stack_) {
        if (!rules_.count(module)) {
            throw ValidationError("no rules for stacked module: " + module);
        }
        report_.checks_per_module[module] = 0;
        report_.cache_hits_per_module[module] = 0;
        if (options_.cache) {
            caches_.emplace(module, DecisionCache(options_.cache->max_entries));
        }
    }
}

void StackEvaluator::run_pass(const std::vector<AccessRequest>& requests) {
    for (const auto& request : requests) {
        Decision decision;
        decision.granted = true;
        for (const auto& module : stack_) {
            ++report_.checks_per_module[module];
            bool allowed = false;
            bool from_cache = false;
            const std::string key = cache_key(request);
            auto cache_it = caches_.find(module);
            if (cache_it != caches_.end()) {
                if (auto cached = cache_it->second.lookup(key)) {
                    allowed = *cached;
                    from_cache = true;
                }
            }
            if (from_cache) {
                ++report_.cache_hits_per_module[module];
            } else {
                allowed = rules_.at(module).decide(request.object_id);
                auto cost_it = options_.cost_units.find(module);
                report_.total_cost_units +=
                    cost_it == options_.cost_units.end() ? 1 : cost_it->second;
                if (cache_it != caches_.end() && (allowed || options_.cache_denials)) {
                    cache_it->second.insert(key, allowed);
                }
            }
            if (!allowed) {
                decision.granted = false;
                decision.denied_by = module;
                break;
            }
        }
        report_.decisions[request.object_id] = decision;
    }
}

StackEvalReport evaluate_stack(const std::vector<AccessRequest>& requests,
                               const std::vector<std::string>& stack_order,
                               const DecisionRuleSet& rules, const StackOptions& options) {
    StackEvaluator evaluator(stack_order, rules, options);
    evaluator.run_pass(requests);
    return evaluator.report();
}

StackEvalReport cached_reevaluate(const std::vector<AccessRequest>& requests, std::int64_t k,
                                  const std::vector<std::string>& stack_order,
                                  const DecisionRuleSet& rules, const StackOptions& options) {
    if (k < 1) {
        throw ValidationError("cached_reevaluate: k must be >= 1");
    }
    StackEvaluator evaluator(stack_order, rules, options);
    for (std::int64_t pass = 0; pass < k; ++pass) {
        evaluator.run_pass(requests);
    }
    return evaluator.report();
}

}  // namespace lsmsim

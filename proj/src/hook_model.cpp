#include "lsmsim/hook_model.hpp"

#include <array>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace lsmsim {

namespace {

using nlohmann::json;

constexpr std::array<std::string_view, 15> kCategoryNames = {
    "inode", "dentry", "file", "superblock", "mmap",     "path",  "bprm", "task",
    "proc",  "ptrace", "cap",  "seclabel",   "cred",     "audit", "other",
};

json parse_json(const std::string& text, const char* what) {
    json doc = json::parse(text, nullptr, false);
    if (doc.is_discarded()) {
        throw ParseError(std::string("malformed ") + what + " document");
    }
    return doc;
}

}  // namespace

SsoCategory sso_category_from_string(std::string_view name) {
    for (std::size_t i = 0; i < kCategoryNames.size(); ++i) {
        if (kCategoryNames[i] == name) {
            return static_cast<SsoCategory>(i);
        }
    }
    throw ValidationError("unknown sso category: " + std::string(name));
}

std::string_view to_string(SsoCategory category) {
    return kCategoryNames[static_cast<std::size_t>(category)];
}

bool is_file_accessing(SsoCategory category) {
    switch (category) {
        case SsoCategory::inode:
        case SsoCategory::dentry:
        case SsoCategory::file:
        case SsoCategory::superblock:
        case SsoCategory::path:
        case SsoCategory::bprm:
            return true;
        default:
            return false;
    }
}

std::int64_t eval_placement(const PlacementFormula& formula, std::int64_t depth) {
    if (depth < 0) {
        throw ValidationError("placement depth must be nonnegative");
    }
    return formula.per_depth * depth + formula.constant;
}

const HookPoint* SecurityModuleSpec::find_hook(std::string_view hook_id) const {
    for (const auto& hook : hooks) {
        if (hook.id == hook_id) {
            return &hook;
        }
    }
    return nullptr;
}

const std::vector<PlacementEntry>* SecurityModuleSpec::placements_for(
    std::string_view syscall) const {
    auto it = placements.find(std::string(syscall));
    return it == placements.end() ? nullptr : &it->second;
}

double SecurityModuleSpec::hook_cost_ns(std::string_view hook_id) const {
    auto it = per_hook_cost_ns.find(std::string(hook_id));
    return it == per_hook_cost_ns.end() ? default_hook_cost_ns : it->second;
}

std::int64_t SecurityModuleSpec::file_accessing_hooks() const {
    std::int64_t n = 0;
    for (const auto& hook : hooks) {
        if (is_file_accessing(hook.category)) {
            ++n;
        }
    }
    return n;
}

std::int64_t hook_count_by_category(const SecurityModuleSpec& spec, SsoCategory category) {
    std::int64_t n = 0;
    for (const auto& hook : spec.hooks) {
        if (hook.category == category) {
            ++n;
        }
    }
    return n;
}

std::int64_t hook_count_by_category(const SecurityModuleSpec& spec, std::string_view category) {
    return hook_count_by_category(spec, sso_category_from_string(category));
}

SecurityModuleSpec load_module_spec(const std::string& descriptor_json) {
    const json doc = parse_json(descriptor_json, "module descriptor");
    if (!doc.is_object() || !doc.contains("name") || !doc["name"].is_string()) {
        throw ParseError("module descriptor needs a string \"name\" field");
    }

    SecurityModuleSpec spec;
    spec.name = doc["name"].get<std::string>();
    if (spec.name.empty()) {
        throw ValidationError("module name must be nonempty");
    }

    if (doc.contains("hooks")) {
        if (!doc["hooks"].is_array()) {
            throw ParseError("\"hooks\" must be an array");
        }
        for (const auto& h : doc["hooks"]) {
            if (!h.is_object() || !h.contains("id") || !h.contains("sso_category")) {
                throw ParseError("hook entries need \"id\" and \"sso_category\"");
            }
            HookPoint hook;
            hook.id = h["id"].get<std::string>();
            hook.category = sso_category_from_string(h["sso_category"].get<std::string>());
            const bool derived = is_authorization_interface(hook.id);
            hook.is_authorization = h.value("is_authorization", derived);
            if (hook.is_authorization != derived) {
                throw ValidationError(
                    "hook " + hook.id +
                    ": is_authorization is fixed by the two policy-enforcement interface ids");
            }
            if (spec.find_hook(hook.id) != nullptr) {
                throw ValidationError("duplicate hook id: " + hook.id);
            }
            spec.hooks.push_back(std::move(hook));
        }
    }

    if (doc.contains("placements")) {
        if (!doc["placements"].is_array()) {
            throw ParseError("\"placements\" must be an array");
        }
        for (const auto& p : doc["placements"]) {
            if (!p.is_object() || !p.contains("syscall") || !p.contains("hook")) {
                throw ParseError("placement entries need \"syscall\" and \"hook\"");
            }
            const auto syscall = p["syscall"].get<std::string>();
            PlacementEntry entry;
            entry.hook_id = p["hook"].get<std::string>();
            entry.formula.per_depth = p.value("per_depth", std::int64_t{0});
            entry.formula.constant = p.value("constant", std::int64_t{0});
            if (entry.formula.per_depth < 0 || entry.formula.constant < 0) {
                throw ValidationError("placement coefficients must be nonnegative");
            }
            if (spec.find_hook(entry.hook_id) == nullptr) {
                throw ValidationError("placement for syscall " + syscall +
                                      " references undeclared hook " + entry.hook_id);
            }
            for (const auto& existing : spec.placements[syscall]) {
                if (existing.hook_id == entry.hook_id) {
                    throw ValidationError("duplicate placement for (" + syscall + ", " +
                                          entry.hook_id + ")");
                }
            }
            spec.placements[syscall].push_back(std::move(entry));
        }
    }

    if (doc.contains("per_hook_cost_ns")) {
        for (const auto& [key, value] : doc["per_hook_cost_ns"].items()) {
            const double cost = value.get<double>();
            if (cost < 0) {
                throw ValidationError("per-hook cost must be nonnegative");
            }
            if (key == "*") {
                spec.default_hook_cost_ns = cost;
            } else {
                if (spec.find_hook(key) == nullptr) {
                    throw ValidationError("per_hook_cost_ns references undeclared hook " + key);
                }
                spec.per_hook_cost_ns[key] = cost;
            }
        }
    }

    if (doc.contains("cache") && !doc["cache"].is_null()) {
        CacheConfig cache;
        cache.max_entries = doc["cache"].value("max_entries", std::size_t{512});
        if (cache.max_entries == 0) {
            throw ValidationError("cache max_entries must be positive");
        }
        spec.cache = cache;
    }

    if (doc.contains("hook_counts_by_category")) {
        for (const auto& [key, value] : doc["hook_counts_by_category"].items()) {
            const SsoCategory category = sso_category_from_string(key);
            const auto declared = value.get<std::int64_t>();
            spec.declared_counts_by_category[category] = declared;
            const auto actual = hook_count_by_category(spec, category);
            if (actual != declared) {
                throw ValidationError("module " + spec.name + ": declared " +
                                      std::to_string(declared) + " " + std::string(key) +
                                      " hooks but the hook set has " + std::to_string(actual));
            }
        }
    }

    if (doc.contains("total_file_accessing")) {
        const auto declared = doc["total_file_accessing"].get<std::int64_t>();
        spec.declared_total_file_accessing = declared;
        if (spec.file_accessing_hooks() != declared) {
            throw ValidationError(
                "module " + spec.name + ": declared " + std::to_string(declared) +
                " file-accessing hooks but the hook set has " +
                std::to_string(spec.file_accessing_hooks()));
        }
    }

    return spec;
}

SecurityModuleSpec load_module_spec_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ParseError("cannot open module descriptor: " + path);
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return load_module_spec(buffer.str());
}

}  // namespace lsmsim

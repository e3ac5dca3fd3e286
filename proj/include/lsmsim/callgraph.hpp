#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "lsmsim/hook_model.hpp"
#include "lsmsim/syscall_model.hpp"

namespace lsmsim {

struct HookAnnotation {
    std::string hook_id;
    PlacementFormula formula;
};

/// Call graph with ordered call-sites per caller plus derived sequence
/// edges linking consecutively executed call-sites of the same body.
struct CallGraph {
    std::vector<std::string> nodes;  // declaration order
    std::map<std::string, std::vector<std::string>> call_edges;  // caller -> ordered callees
    std::set<std::pair<std::string, std::string>> seq_edges;
    std::map<std::string, HookAnnotation> hook_annotations;

    bool has_node(const std::string& name) const;
    std::size_t call_edge_count() const;

    /// All edges as (from, to, kind) with kind "call" or "seq", call edges
    /// first in declaration order, then seq edges sorted.
    std::vector<std::tuple<std::string, std::string, std::string>> all_edges() const;
};

/// Parses the line-based graph format:
///   node <name> [hook=<id> per_depth=<a> const=<b>]
///   call <caller> -> <callee1>, <callee2>, ...
/// Callee order is source order; edges referencing undeclared nodes are
/// rejected. '#' starts a comment.
CallGraph parse_callgraph(const std::string& text);
CallGraph parse_callgraph_file(const std::string& path);

/// Adds a sequence edge between the callees of each pair of adjacent
/// call-sites in every caller body (transitive order is left to
/// reachability). Never removes edges; idempotent.
CallGraph augment_sequence_edges(CallGraph g);

/// Worst-case hook firings reachable from an entry at a given depth: each
/// reachable annotated node contributes eval_placement(formula, depth)
/// once, whatever cycles the graph has.
struct HookCountReport {
    std::string entry;
    std::int64_t depth = 0;
    std::map<std::string, std::int64_t> per_hook;
    std::int64_t total = 0;
};

HookCountReport count_hooks_worst_case(const CallGraph& g, const std::string& entry,
                                       std::int64_t depth);

struct HookExcess {
    std::string hook_id;
    std::int64_t dynamic_count = 0;
    std::int64_t static_count = 0;
};

/// Consistent iff every dynamic per-hook count is bounded by the static
/// worst case for the same syscall/depth parameters.
struct ConsistencyVerdict {
    bool consistent = true;
    std::vector<HookExcess> excesses;
};

ConsistencyVerdict compare_static_dynamic(const HookCountReport& report,
                                          const HookInvocationTrace& trace);

/// Synthesizes the call graph of one syscall under one module from its
/// placement table: sys_<syscall> calls one annotated check node per
/// placement entry, in descriptor order.
CallGraph graph_from_module(const SecurityModuleSpec& spec, const std::string& syscall);

}  // namespace lsmsim

#include "lsmsim/callgraph.hpp"

#include <deque>
#include <fstream>
#include <sstream>

#include "lsmsim/errors.hpp"

namespace lsmsim {

namespace {

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r\n");
    if (begin == std::string::npos) {
        return {};
    }
    const auto end = s.find_last_not_of(" \t\r\n");
    return s.substr(begin, end - begin + 1);
}

std::vector<std::string> split_ws(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream in(s);
    std::string tok;
    while (in >> tok) {
        out.push_back(tok);
    }
    return out;
}

[[noreturn]] void fail(std::size_t line_no, const std::string& message) {
    throw ParseError("graph line " + std::to_string(line_no) + ": " + message);
}

}  // namespace

bool CallGraph::has_node(const std::string& name) const {
    for (const auto& node : nodes) {
        if (node == name) {
            return true;
        }
    }
    return false;
}

std::size_t CallGraph::call_edge_count() const {
    std::size_t n = 0;
    for (const auto& [caller, callees] : call_edges) {
        n += callees.size();
    }
    return n;
}

std::vector<std::tuple<std::string, std::string, std::string>> CallGraph::all_edges() const {
    std::vector<std::tuple<std::string, std::string, std::string>> edges;
    for (const auto& node : nodes) {
        auto it = call_edges.find(node);
        if (it == call_edges.end()) continue;
        for (const auto& callee : it->second) {
            edges.emplace_back(node, callee, "call");
        }
    }
    for (const auto& [from, to] : seq_edges) {
        edges.emplace_back(from, to, "seq");
    }
    return edges;
}

CallGraph parse_callgraph(const std::string& text) {
    CallGraph g;
    std::istringstream in(text);
    std::string raw;
    std::size_t line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        const auto comment = raw.find('#');
        if (comment != std::string::npos) {
            raw = raw.substr(0, comment);
        }
        const std::string line = trim(raw);
        if (line.empty()) {
            continue;
        }

        if (line.rfind("node", 0) == 0) {
            const auto tokens = split_ws(line);
            if (tokens.size() < 2) {
                fail(line_no, "node line needs a name");
            }
            const std::string& name = tokens[1];
            if (g.has_node(name)) {
                fail(line_no, "duplicate node " + name);
            }
            g.nodes.push_back(name);
            if (tokens.size() > 2) {
                HookAnnotation annotation;
                bool has_hook = false;
                for (std::size_t i = 2; i < tokens.size(); ++i) {
                    const auto eq = tokens[i].find('=');
                    if (eq == std::string::npos) {
                        fail(line_no, "expected key=value, got " + tokens[i]);
                    }
                    const std::string key = tokens[i].substr(0, eq);
                    const std::string value = tokens[i].substr(eq + 1);
                    try {
                        if (key == "hook") {
                            annotation.hook_id = value;
                            has_hook = true;
                        } else if (key == "per_depth") {
                            annotation.formula.per_depth = std::stoll(value);
                        } else if (key == "const") {
                            annotation.formula.constant = std::stoll(value);
                        } else {
                            fail(line_no, "unknown attribute " + key);
                        }
                    } catch (const std::invalid_argument&) {
                        fail(line_no, "bad integer in " + tokens[i]);
                    }
                }
                if (!has_hook) {
                    fail(line_no, "annotated node needs hook=<id>");
                }
                if (annotation.formula.per_depth < 0 || annotation.formula.constant < 0) {
                    fail(line_no, "negative placement coefficients");
                }
                g.hook_annotations[name] = std::move(annotation);
            }
        } else if (line.rfind("call", 0) == 0) {
            const auto arrow = line.find("->");
            if (arrow == std::string::npos) {
                fail(line_no, "call line needs '->'");
            }
            const std::string caller = trim(line.substr(4, arrow - 4));
            if (caller.empty()) {
                fail(line_no, "call line needs a caller");
            }
            if (!g.has_node(caller)) {
                fail(line_no, "call from undeclared node " + caller);
            }
            std::string rest = line.substr(arrow + 2);
            std::istringstream callees(rest);
            std::string callee;
            bool any = false;
            while (std::getline(callees, callee, ',')) {
                callee = trim(callee);
                if (callee.empty()) {
                    fail(line_no, "empty callee name");
                }
                if (!g.has_node(callee)) {
                    fail(line_no, "call to undeclared node " + callee);
                }
                g.call_edges[caller].push_back(callee);
                any = true;
            }
            if (!any) {
                fail(line_no, "call line needs at least one callee");
            }
        } else {
            fail(line_no, "expected 'node' or 'call'");
        }
    }
    return g;
}

CallGraph parse_callgraph_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ParseError("cannot open graph file: " + path);
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_callgraph(buffer.str());
}

CallGraph augment_sequence_edges(CallGraph g) {
    std::set<std::pair<std::string, std::string>> seq;
    for (const auto& [caller, callees] : g.call_edges) {
        for (std::size_t i = 0; i + 1 < callees.size(); ++i) {
            seq.emplace(callees[i], callees[i + 1]);
        }
    }
    // Derived purely from call edges, so recomputation is idempotent; keep
    // any preexisting seq edges.
    g.seq_edges.insert(seq.begin(), seq.end());
    return g;
}

HookCountReport count_hooks_worst_case(const CallGraph& g, const std::string& entry,
                                       std::int64_t depth) {
    if (!g.has_node(entry)) {
        throw ValidationError("unknown entry node: " + entry);
    }
    std::set<std::string> visited;
    std::deque<std::string> frontier{entry};
    visited.insert(entry);
    while (!frontier.empty()) {
        const std::string node = frontier.front();
        frontier.pop_front();
        auto it = g.call_edges.find(node);
        if (it != g.call_edges.end()) {
            for (const auto& callee : it->second) {
                if (visited.insert(callee).second) {
                    frontier.push_back(callee);
                }
            }
        }
        for (const auto& [from, to] : g.seq_edges) {
            if (from == node && visited.insert(to).second) {
                frontier.push_back(to);
            }
        }
    }

    HookCountReport report;
    report.entry = entry;
    report.depth = depth;
    for (const auto& node : visited) {
        auto it = g.hook_annotations.find(node);
        if (it == g.hook_annotations.end()) {
            continue;
        }
        const std::int64_t firings = eval_placement(it->second.formula, depth);
        report.per_hook[it->second.hook_id] += firings;
        report.total += firings;
    }
    return report;
}

ConsistencyVerdict compare_static_dynamic(const HookCountReport& report,
                                          const HookInvocationTrace& trace) {
    ConsistencyVerdict verdict;
    const auto dynamic_counts = invocation_histogram(trace);
    for (const auto& [hook, dynamic_count] : dynamic_counts) {
        auto it = report.per_hook.find(hook);
        const std::int64_t static_count = it == report.per_hook.end() ? 0 : it->second;
        if (dynamic_count > static_count) {
            verdict.consistent = false;
            verdict.excesses.push_back({hook, dynamic_count, static_count});
        }
    }
    return verdict;
}

CallGraph graph_from_module(const SecurityModuleSpec& spec, const std::string& syscall) {
    CallGraph g;
    const std::string entry = "sys_" + syscall;
    g.nodes.push_back(entry);
    const auto* entries = spec.placements_for(syscall);
    if (entries != nullptr) {
        for (const auto& entry_def : *entries) {
            const std::string node = spec.name + "__" + syscall + "__" + entry_def.hook_id;
            g.nodes.push_back(node);
            g.call_edges[entry].push_back(node);
            g.hook_annotations[node] = {entry_def.hook_id, entry_def.formula};
        }
    }
    return augment_sequence_edges(std::move(g));
}

}  // namespace lsmsim

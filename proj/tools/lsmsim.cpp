// Command-line front end: loads descriptors and scenarios, orchestrates
// delay sweeps, stack evaluations and static call-graph analyses, and
// emits CSV / plot-data reports plus a run manifest.

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "lsmsim/callgraph.hpp"
#include "lsmsim/errors.hpp"
#include "lsmsim/hook_model.hpp"
#include "lsmsim/latency_sim.hpp"
#include "lsmsim/regression.hpp"
#include "lsmsim/stacking.hpp"
#include "lsmsim/syscall_model.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr const char* kVersion = "0.1.0";

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitInternal = 2;
constexpr int kExitInconsistent = 3;

std::string fmt(double v) {
    char buffer[64];
    std::snprintf(buffer, sizeof(buffer), "%.10g", v);
    return buffer;
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string tok;
    std::istringstream in(s);
    while (std::getline(in, tok, sep)) {
        if (!tok.empty()) {
            out.push_back(tok);
        }
    }
    return out;
}

// All outputs go through write-temp-then-rename and are recorded for the
// run manifest.
class OutputTree {
public:
    OutputTree(fs::path root, std::string command, std::uint64_t seed)
        : root_(std::move(root)), command_(std::move(command)), seed_(seed) {}

    void add_input(const std::string& path) { inputs_.push_back(path); }

    void write(const std::string& relative, const std::string& content) {
        const fs::path target = root_ / relative;
        fs::create_directories(target.parent_path());
        const fs::path tmp = target.string() + ".tmp";
        {
            std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
            if (!out) {
                throw lsmsim::Error("cannot write " + tmp.string());
            }
            out << content;
        }
        fs::rename(tmp, target);
        outputs_.push_back(relative);
    }

    void finalize() {
        json manifest;
        manifest["command"] = command_;
        manifest["inputs"] = inputs_;
        manifest["rng_seed"] = seed_;
        // Outputs are relative to the manifest's own directory, so the tree
        // stays byte-identical wherever it is written.
        manifest["out_dir"] = ".";
        manifest["tool_version"] = kVersion;
        manifest["outputs"] = outputs_;
        manifest["manifest"] = "manifest.json";
        const fs::path target = root_ / "manifest.json";
        const fs::path tmp = target.string() + ".tmp";
        {
            std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
            out << manifest.dump(2) << "\n";
        }
        fs::rename(tmp, target);
    }

private:
    fs::path root_;
    std::string command_;
    std::uint64_t seed_;
    std::vector<std::string> inputs_;
    std::vector<std::string> outputs_;
};

struct GlobalOptions {
    std::string out_dir = "out";
    std::string data_dir = "data";
    std::uint64_t seed = 0;
    bool quiet = false;
    std::string modules;  // default descriptor list for sweep/cga
};

std::string resolve_input(const GlobalOptions& opts, const std::string& kind,
                          const std::string& token, const std::string& extension) {
    if (fs::exists(token)) {
        return token;
    }
    const fs::path bundled = fs::path(opts.data_dir) / kind / (token + extension);
    if (fs::exists(bundled)) {
        return bundled.string();
    }
    throw lsmsim::ParseError("cannot find " + kind + " input '" + token + "' (tried " +
                             token + " and " + bundled.string() + ")");
}

std::vector<lsmsim::SecurityModuleSpec> load_stack(const GlobalOptions& opts,
                                                   const std::string& modules_arg,
                                                   OutputTree& tree) {
    std::vector<lsmsim::SecurityModuleSpec> stack;
    for (const auto& token : split(modules_arg, ',')) {
        const std::string path = resolve_input(opts, "modules", token, ".json");
        tree.add_input(path);
        stack.push_back(lsmsim::load_module_spec_file(path));
    }
    if (stack.empty()) {
        throw lsmsim::ParseError("--modules must name at least one descriptor");
    }
    return stack;
}

std::vector<double> parse_grid(const std::string& text) {
    const auto parts = split(text, ':');
    if (parts.size() == 1) {
        return {std::stod(parts[0])};
    }
    if (parts.size() != 3) {
        throw lsmsim::ParseError("grid must be <value> or start:stop:step");
    }
    const double start = std::stod(parts[0]);
    const double stop = std::stod(parts[1]);
    const double step = std::stod(parts[2]);
    if (step <= 0 || stop < start) {
        throw lsmsim::ParseError("grid requires step > 0 and stop >= start");
    }
    std::vector<double> grid;
    for (double v = start; v <= stop + 1e-9; v += step) {
        grid.push_back(v);
    }
    return grid;
}

std::string benchmark_of_label(const std::string& label) {
    std::string candidate = label;
    while (true) {
        for (const auto& name : lsmsim::benchmark_names()) {
            if (candidate == name) {
                return name;
            }
        }
        const auto us = candidate.rfind('_');
        if (us == std::string::npos) {
            return label;
        }
        candidate = candidate.substr(0, us);
    }
}

// ---------------------------------------------------------------- sweep

struct SweepArgs {
    std::vector<std::string> scenarios;
    std::string modules;
    std::string grid = "0:110:10";
    std::int64_t reps = 300;
    std::int64_t warmup = -1;  // -1 = per-benchmark default
    std::int64_t depth = 0;
    double noise = 0.0;
    std::int64_t buffer = -1;
    bool raw = false;
    bool empty_dir_hooks = false;
    double epsilon = 500.0;
    double hook_unit_cost = 0.0;
    double per_byte = 0.25;
    double hook_cost_scale = 1.0;
};

std::string sweep_csv(const lsmsim::SweepResult& result) {
    std::string csv = "scenario,delay_us,mean_ns,variance\n";
    for (const auto& p : result.points) {
        csv += result.scenario_label + "," + fmt(p.delay_us) + "," + fmt(p.mean_ns) + "," +
               fmt(p.variance_ns2) + "\n";
    }
    return csv;
}

std::string raw_csv(const lsmsim::SweepResult& result) {
    std::string csv = "scenario,delay_us,repetition,latency_ns\n";
    for (const auto& p : result.points) {
        for (std::size_t rep = 0; rep < p.raw.size(); ++rep) {
            csv += result.scenario_label + "," + fmt(p.delay_us) + "," + std::to_string(rep) +
                   "," + fmt(p.raw[rep]) + "\n";
        }
    }
    return csv;
}

std::string plot_data(const lsmsim::SweepResult& result) {
    std::string out;
    for (const auto& p : result.points) {
        out += fmt(p.delay_us) + " " + fmt(p.mean_ns) + "\n";
    }
    return out;
}

std::string fits_csv(const std::vector<lsmsim::SlopeRow>& rows) {
    std::string csv = "scenario,slope,intercept,r_squared\n";
    for (const auto& r : rows) {
        csv += r.scenario + "," + fmt(r.slope) + "," + fmt(r.intercept_ns) + "," +
               fmt(r.r_squared) + "\n";
    }
    return csv;
}

int run_sweep_cmd(const GlobalOptions& opts, const SweepArgs& args) {
    OutputTree tree(opts.out_dir, "sweep", opts.seed);

    lsmsim::LatencyModel model;
    model.constant_cost_ns = args.epsilon;
    model.hooking_unit_cost_ns = args.hook_unit_cost;
    model.per_byte_transfer_ns = args.per_byte;
    model.hook_cost_scale = args.hook_cost_scale;

    std::string modules_arg = args.modules.empty() ? opts.modules : args.modules;
    if (modules_arg.empty()) {
        modules_arg = "tunable";
    }
    const auto stack = load_stack(opts, modules_arg, tree);

    std::vector<lsmsim::SyscallScenario> scenarios;
    for (const auto& arg : args.scenarios) {
        for (const auto& token : split(arg, ',')) {
            const std::string path = resolve_input(opts, "scenarios", token, ".json");
            tree.add_input(path);
            auto scenario = lsmsim::load_scenario_file(path);
            if (args.depth > 0) {
                scenario.path = lsmsim::make_depth_path(args.depth, scenario.path.kind);
                scenario.label = scenario.name + "_d" + std::to_string(args.depth);
            }
            if (args.buffer >= 0) {
                scenario.buffer_size_bytes = args.buffer;
            }
            scenarios.push_back(std::move(scenario));
        }
    }
    if (scenarios.empty()) {
        throw lsmsim::ParseError("sweep needs at least one --scenario");
    }

    lsmsim::BuildTraceOptions trace_options;
    trace_options.empty_dir_hooks = args.empty_dir_hooks;

    std::vector<lsmsim::SweepResult> results;
    for (const auto& scenario : scenarios) {
        lsmsim::SweepConfig sweep;
        sweep.delays_us = parse_grid(args.grid);
        sweep.repetitions = args.reps;
        sweep.warmup_repetitions =
            args.warmup >= 0 ? args.warmup
                             : (lsmsim::is_throughput_benchmark(scenario.name) ? 1000 : 0);
        sweep.noise_stddev_ns = args.noise;
        sweep.rng_seed = opts.seed;
        sweep.keep_raw = args.raw;
        results.push_back(lsmsim::run_sweep(scenario, stack, model, sweep, trace_options));
    }

    for (const auto& result : results) {
        tree.write(result.scenario_label + "_sweep.csv", sweep_csv(result));
        tree.write(result.scenario_label + ".dat", plot_data(result));
        if (args.raw) {
            tree.write(result.scenario_label + "_raw.csv", raw_csv(result));
        }
    }
    // A fit needs at least 3 grid points; single-point sweeps are still
    // valid baseline inputs for `report`. Degenerate scenarios (constant
    // latency, e.g. a zero-hook trace) keep their sweep CSV but get no
    // fit row.
    if (parse_grid(args.grid).size() >= 3) {
        std::vector<lsmsim::SlopeRow> rows;
        for (const auto& result : results) {
            try {
                rows.push_back(lsmsim::slope_report({result})[0]);
            } catch (const lsmsim::DegenerateInputError& e) {
                if (!opts.quiet) {
                    std::cerr << result.scenario_label << ": no fit (" << e.what() << ")\n";
                }
            }
        }
        tree.write("fits.csv", fits_csv(rows));
        if (!opts.quiet) {
            for (const auto& r : rows) {
                std::cout << r.scenario << ": slope " << fmt(r.slope) << ", r^2 "
                          << fmt(r.r_squared) << "\n";
            }
        }
    }
    tree.finalize();
    return kExitOk;
}

// ---------------------------------------------------------------- stack

struct StackArgs {
    std::string rules;
    std::string requests;
    std::vector<std::string> orders;
    bool all_orders = false;
    std::int64_t cache = 0;
    bool cache_denials = true;
    std::int64_t repeat = 1;
    std::vector<std::string> costs;
};

std::vector<lsmsim::AccessRequest> load_requests(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw lsmsim::ParseError("cannot open requests file: " + path);
    }
    json doc = json::parse(in, nullptr, false);
    if (doc.is_discarded() || !doc.is_array()) {
        throw lsmsim::ParseError("requests file must be a JSON array");
    }
    std::vector<lsmsim::AccessRequest> requests;
    for (const auto& r : doc) {
        lsmsim::AccessRequest request;
        request.subject_label = r.value("subject", std::int64_t{0});
        request.object_id = r.at("object").get<std::string>();
        request.op = lsmsim::access_op_from_string(r.value("op", "open"));
        requests.push_back(std::move(request));
    }
    return requests;
}

std::string joined(const std::vector<std::string>& parts, char sep) {
    std::string out;
    for (const auto& p : parts) {
        if (!out.empty()) out += sep;
        out += p;
    }
    return out;
}

std::string stack_csv(const std::vector<std::string>& order,
                      const lsmsim::StackEvalReport& report) {
    std::string csv = "module,checks,cache_hits\n";
    for (const auto& module : order) {
        csv += module + "," + std::to_string(report.checks_per_module.at(module)) + "," +
               std::to_string(report.cache_hits_per_module.at(module)) + "\n";
    }
    return csv;
}

int run_stack_cmd(const GlobalOptions& opts, const StackArgs& args) {
    OutputTree tree(opts.out_dir, "stack", opts.seed);

    lsmsim::DecisionRuleSet rules;
    std::vector<std::string> loaded_order;
    for (const auto& token : split(args.rules, ',')) {
        const std::string path = resolve_input(opts, "rules", token, ".json");
        tree.add_input(path);
        auto module_rules = lsmsim::load_rules_file(path);
        loaded_order.push_back(module_rules.module);
        rules[module_rules.module] = std::move(module_rules);
    }
    if (rules.empty()) {
        throw lsmsim::ParseError("--rules must name at least one rules file");
    }
    const std::string requests_path = resolve_input(opts, "requests", args.requests, ".json");
    tree.add_input(requests_path);
    const auto requests = load_requests(requests_path);

    lsmsim::StackOptions stack_options;
    if (args.cache > 0) {
        stack_options.cache = lsmsim::CacheConfig{static_cast<std::size_t>(args.cache)};
    }
    stack_options.cache_denials = args.cache_denials;
    for (const auto& cost : args.costs) {
        const auto eq = cost.find('=');
        if (eq == std::string::npos) {
            throw lsmsim::ParseError("--cost expects MODULE=UNITS");
        }
        stack_options.cost_units[cost.substr(0, eq)] = std::stoll(cost.substr(eq + 1));
    }

    std::vector<std::vector<std::string>> orders;
    for (const auto& order_arg : args.orders) {
        orders.push_back(split(order_arg, ','));
    }
    if (orders.empty() && !args.all_orders) {
        orders.push_back(loaded_order);
    }

    std::string summary = "order,total_cost_units,granted\n";
    auto evaluate = [&](const std::vector<std::string>& order, bool write_file) {
        const auto report =
            lsmsim::cached_reevaluate(requests, args.repeat, order, rules, stack_options);
        if (write_file) {
            tree.write("stack_" + joined(order, '-') + ".csv", stack_csv(order, report));
        }
        std::vector<std::string> granted = report.granted_objects();
        summary += joined(order, '|') + "," + std::to_string(report.total_cost_units) + "," +
                   joined(granted, '|') + "\n";
        return report;
    };

    if (args.all_orders) {
        std::vector<std::string> base = orders.empty() ? loaded_order : orders.front();
        std::sort(base.begin(), base.end());
        do {
            if (std::find(orders.begin(), orders.end(), base) == orders.end()) {
                orders.push_back(base);
            }
        } while (std::next_permutation(base.begin(), base.end()));
    }

    std::int64_t best_cost = -1;
    std::vector<std::string> best_order;
    std::size_t explicit_orders = args.orders.size();
    for (std::size_t i = 0; i < orders.size(); ++i) {
        const auto report = evaluate(orders[i], i < explicit_orders || !args.all_orders);
        if (best_cost < 0 || report.total_cost_units < best_cost) {
            best_cost = report.total_cost_units;
            best_order = orders[i];
        }
        if (!opts.quiet && (i < explicit_orders || !args.all_orders)) {
            std::cout << joined(orders[i], ',') << ": total_cost_units "
                      << report.total_cost_units << "\n";
        }
    }
    if (args.all_orders && !opts.quiet) {
        std::cout << "minimum-cost order: " << joined(best_order, ',') << " (" << best_cost
                  << " units)\n";
    }
    tree.write("stack_summary.csv", summary);
    tree.finalize();
    return kExitOk;
}

// ---------------------------------------------------------------- cga

struct CgaArgs {
    std::string graph;
    std::string modules;
    std::string syscall;
    std::string entry;
    std::string depths = "1";
    bool show_edges = false;
    std::string trace_scenario;
};

std::vector<std::int64_t> parse_depths(const std::string& text) {
    const auto parts = split(text, ':');
    if (parts.size() == 1) {
        return {std::stoll(parts[0])};
    }
    if (parts.size() != 2) {
        throw lsmsim::ParseError("--depths expects <n> or <lo>:<hi>");
    }
    std::vector<std::int64_t> depths;
    for (std::int64_t d = std::stoll(parts[0]); d <= std::stoll(parts[1]); ++d) {
        depths.push_back(d);
    }
    return depths;
}

int run_cga_cmd(const GlobalOptions& opts, const CgaArgs& args) {
    OutputTree tree(opts.out_dir, "cga", opts.seed);

    std::optional<lsmsim::CallGraph> graph;
    std::vector<lsmsim::SecurityModuleSpec> stack;
    const std::string modules_arg = args.modules.empty() ? opts.modules : args.modules;
    if (!modules_arg.empty()) {
        stack = load_stack(opts, modules_arg, tree);
    }
    std::string entry = args.entry;
    if (!args.graph.empty()) {
        const std::string path = resolve_input(opts, "graphs", args.graph, ".cg");
        tree.add_input(path);
        graph = lsmsim::augment_sequence_edges(lsmsim::parse_callgraph_file(path));
        if (entry.empty()) {
            if (graph->nodes.empty()) {
                throw lsmsim::ValidationError("graph has no nodes");
            }
            entry = graph->nodes.front();
        }
    } else if (!stack.empty() && !args.syscall.empty()) {
        graph = lsmsim::graph_from_module(stack.front(), args.syscall);
        if (entry.empty()) {
            entry = "sys_" + args.syscall;
        }
    } else {
        throw lsmsim::ParseError("cga needs --graph or (--modules and --syscall)");
    }

    if (args.show_edges && !opts.quiet) {
        for (const auto& [from, to, kind] : graph->all_edges()) {
            std::cout << from << " -> " << to << " [" << kind << "]\n";
        }
    }

    std::string csv = "entry,depth,hook,count\n";
    std::vector<lsmsim::HookCountReport> reports;
    for (const auto depth : parse_depths(args.depths)) {
        auto report = lsmsim::count_hooks_worst_case(*graph, entry, depth);
        for (const auto& [hook, count] : report.per_hook) {
            csv += entry + "," + std::to_string(depth) + "," + hook + "," +
                   std::to_string(count) + "\n";
        }
        reports.push_back(std::move(report));
    }
    tree.write("cga_report.csv", csv);

    int exit_code = kExitOk;
    if (!args.trace_scenario.empty()) {
        if (stack.empty()) {
            throw lsmsim::ParseError("--trace needs --modules for the dynamic side");
        }
        const std::string path =
            resolve_input(opts, "scenarios", args.trace_scenario, ".json");
        tree.add_input(path);
        const auto scenario = lsmsim::load_scenario_file(path);
        const auto trace = lsmsim::build_trace(scenario, stack);
        const auto report =
            lsmsim::count_hooks_worst_case(*graph, entry, scenario.path.depth());
        const auto verdict = lsmsim::compare_static_dynamic(report, trace);
        if (verdict.consistent) {
            if (!opts.quiet) {
                std::cout << "consistent: dynamic counts within static worst case\n";
            }
        } else {
            for (const auto& excess : verdict.excesses) {
                std::cerr << "dynamic_exceeds_static: " << excess.hook_id << " dynamic "
                          << excess.dynamic_count << " > static " << excess.static_count
                          << "\n";
            }
            exit_code = kExitInconsistent;
        }
    }
    tree.finalize();
    return exit_code;
}

// ---------------------------------------------------------------- report

struct ReportArgs {
    std::string baseline;
    std::string target;
    std::string metric = "auto";
};

std::map<std::string, double> first_delay_means(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw lsmsim::ParseError("cannot open sweep csv: " + path);
    }
    std::string line;
    if (!std::getline(in, line)) {
        throw lsmsim::ParseError("empty sweep csv: " + path);
    }
    std::map<std::string, std::pair<double, double>> best;  // scenario -> (delay, mean)
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto cols = split(line, ',');
        if (cols.size() < 3) {
            throw lsmsim::ParseError("bad sweep csv row: " + line);
        }
        const std::string& scenario = cols[0];
        const double delay = std::stod(cols[1]);
        const double mean = std::stod(cols[2]);
        auto it = best.find(scenario);
        if (it == best.end() || delay < it->second.first) {
            best[scenario] = {delay, mean};
        }
    }
    std::map<std::string, double> means;
    for (const auto& [scenario, dm] : best) {
        means[scenario] = dm.second;
    }
    return means;
}

int run_report_cmd(const GlobalOptions& opts, const ReportArgs& args) {
    OutputTree tree(opts.out_dir, "report", opts.seed);
    tree.add_input(args.baseline);
    tree.add_input(args.target);
    const auto baseline = first_delay_means(args.baseline);
    const auto target = first_delay_means(args.target);

    std::vector<std::string> missing_in_baseline;
    std::vector<std::string> missing_in_target;
    for (const auto& [scenario, _] : target) {
        if (!baseline.count(scenario)) missing_in_baseline.push_back(scenario);
    }
    for (const auto& [scenario, _] : baseline) {
        if (!target.count(scenario)) missing_in_target.push_back(scenario);
    }
    if (!missing_in_baseline.empty() || !missing_in_target.empty()) {
        std::string message = "scenario sets differ;";
        if (!missing_in_baseline.empty()) {
            message += " missing in baseline: " + joined(missing_in_baseline, ' ');
        }
        if (!missing_in_target.empty()) {
            message += " missing in target: " + joined(missing_in_target, ' ');
        }
        throw lsmsim::ValidationError(message);
    }

    std::string csv = "scenario,metric,baseline,target,rate\n";
    for (const auto& [scenario, base_mean] : baseline) {
        lsmsim::MetricKind kind;
        if (args.metric == "auto") {
            kind = lsmsim::is_throughput_benchmark(benchmark_of_label(scenario))
                       ? lsmsim::MetricKind::throughput
                       : lsmsim::MetricKind::latency;
        } else {
            kind = lsmsim::metric_kind_from_string(args.metric);
        }
        const double target_mean = target.at(scenario);
        double base_value = base_mean;
        double target_value = target_mean;
        if (kind == lsmsim::MetricKind::throughput) {
            base_value = 1e9 / base_mean;    // operations per second
            target_value = 1e9 / target_mean;
        }
        const auto rate = lsmsim::regression_rate(target_value, base_value, kind);
        csv += scenario + "," + std::string(to_string(kind)) + "," + fmt(base_value) + "," +
               fmt(target_value) + "," + fmt(rate.rate) + "\n";
    }
    tree.write("report.csv", csv);
    tree.finalize();
    return kExitOk;
}

// ---------------------------------------------------------------- reproduce

int run_reproduce_cmd(const GlobalOptions& opts) {
    OutputTree tree(opts.out_dir, "reproduce", opts.seed);

    const std::string tunable_path = resolve_input(opts, "modules", "tunable", ".json");
    tree.add_input(tunable_path);
    const std::vector<lsmsim::SecurityModuleSpec> stack = {
        lsmsim::load_module_spec_file(tunable_path)};

    lsmsim::LatencyModel model;
    model.constant_cost_ns = 500.0;
    model.per_byte_transfer_ns = 0.25;

    auto sweep_for = [&](const std::string& scenario_token) {
        const std::string path = resolve_input(opts, "scenarios", scenario_token, ".json");
        tree.add_input(path);
        const auto scenario = lsmsim::load_scenario_file(path);
        lsmsim::SweepConfig sweep;
        sweep.delays_us = lsmsim::SweepConfig::default_grid();
        sweep.repetitions = 300;
        sweep.warmup_repetitions = lsmsim::is_throughput_benchmark(scenario.name) ? 1000 : 0;
        sweep.rng_seed = opts.seed;
        return lsmsim::run_sweep(scenario, stack, model, sweep);
    };

    // Directory-depth slopes for open and stat.
    std::vector<lsmsim::SweepResult> depth_slopes;
    for (const std::string base : {"open", "stat"}) {
        for (const int depth : {1, 2, 4, 8}) {
            auto result = sweep_for(base + "_d" + std::to_string(depth));
            tree.write("depth_slopes/" + result.scenario_label + "_sweep.csv", sweep_csv(result));
            tree.write("depth_slopes/" + result.scenario_label + ".dat", plot_data(result));
            depth_slopes.push_back(std::move(result));
        }
    }
    tree.write("depth_slopes/fits.csv", fits_csv(lsmsim::slope_report(depth_slopes)));

    // Per-benchmark slopes at the default depth.
    std::vector<lsmsim::SweepResult> defaults;
    for (const auto& name : lsmsim::benchmark_names()) {
        auto result = sweep_for(name);
        tree.write("benchmarks/" + result.scenario_label + "_sweep.csv", sweep_csv(result));
        tree.write("benchmarks/" + result.scenario_label + ".dat", plot_data(result));
        defaults.push_back(std::move(result));
    }
    tree.write("benchmarks/fits.csv", fits_csv(lsmsim::slope_report(defaults)));

    // Whitelist stacking orders.
    lsmsim::DecisionRuleSet rules;
    for (const std::string module : {"A", "B", "C"}) {
        const std::string path = resolve_input(opts, "rules", module, ".json");
        tree.add_input(path);
        auto module_rules = lsmsim::load_rules_file(path);
        rules[module_rules.module] = std::move(module_rules);
    }
    const std::string requests_path = resolve_input(opts, "requests", "whitelist_demo", ".json");
    tree.add_input(requests_path);
    const auto requests = load_requests(requests_path);

    std::string summary = "order,total_cost_units,granted\n";
    std::vector<std::vector<std::string>> orders = {{"A", "B", "C"}, {"C", "A", "B"}};
    {
        std::vector<std::string> base = {"A", "B", "C"};
        std::sort(base.begin(), base.end());
        do {
            if (std::find(orders.begin(), orders.end(), base) == orders.end()) {
                orders.push_back(base);
            }
        } while (std::next_permutation(base.begin(), base.end()));
    }
    for (const auto& order : orders) {
        const auto report = lsmsim::evaluate_stack(requests, order, rules);
        tree.write("stacking/stack_" + joined(order, '-') + ".csv",
                   stack_csv(order, report));
        summary += joined(order, '|') + "," + std::to_string(report.total_cost_units) + "," +
                   joined(report.granted_objects(), '|') + "\n";
    }
    tree.write("stacking/stack_summary.csv", summary);

    // Callback-edge augmentation sample.
    const std::string toy_path = resolve_input(opts, "graphs", "toy", ".cg");
    tree.add_input(toy_path);
    const auto toy = lsmsim::augment_sequence_edges(lsmsim::parse_callgraph_file(toy_path));
    std::string edges;
    for (const auto& [from, to, kind] : toy.all_edges()) {
        edges += from + " -> " + to + " [" + kind + "]\n";
    }
    tree.write("toygraph/edges.txt", edges);

    tree.finalize();
    if (!opts.quiet) {
        std::cout << "reproduce outputs written to " << opts.out_dir << "\n";
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Authorization-hook overhead simulator and analysis toolkit"};
    app.set_version_flag("--version", kVersion);

    GlobalOptions opts;
    app.add_option("--out", opts.out_dir, "Output directory")->capture_default_str();
    app.add_option("--data", opts.data_dir, "Bundled data directory")
        ->capture_default_str();
    app.add_option("--seed", opts.seed, "RNG seed")->capture_default_str();
    app.add_flag("--quiet", opts.quiet, "Suppress stdout summaries");
    app.add_option("--modules", opts.modules,
                   "Default module descriptors for sweep/cga (comma separated)");
    app.fallthrough();
    app.require_subcommand(1);

    SweepArgs sweep_args;
    auto* sweep = app.add_subcommand("sweep", "Delay sweep + per-scenario OLS fits");
    sweep->add_option("--scenario", sweep_args.scenarios,
                      "Scenario name(s) or file(s), comma separable")
        ->required();
    sweep->add_option("--modules", sweep_args.modules,
                      "Module descriptor names/files, stacked in order");
    sweep->add_option("--grid", sweep_args.grid, "Delay grid in us, start:stop:step");
    sweep->add_option("--reps", sweep_args.reps, "Repetitions per grid point");
    sweep->add_option("--warmup", sweep_args.warmup,
                      "Warmup repetitions (default: 1000 for throughput benchmarks)");
    sweep->add_option("--depth", sweep_args.depth, "Override path depth (components AA/BB/...)");
    sweep->add_option("--noise", sweep_args.noise, "Gaussian noise stddev in ns");
    sweep->add_option("--buffer", sweep_args.buffer, "Override buffer size in bytes");
    sweep->add_flag("--raw", sweep_args.raw, "Also write per-repetition samples");
    sweep->add_flag("--empty-dir-hooks", sweep_args.empty_dir_hooks,
                    "Drop mkdir/rmdir placements");
    sweep->add_option("--epsilon", sweep_args.epsilon, "Constant cost in ns");
    sweep->add_option("--hook-unit-cost", sweep_args.hook_unit_cost,
                      "Uniform per-firing cost in ns");
    sweep->add_option("--per-byte", sweep_args.per_byte, "Transfer cost in ns per byte");
    sweep->add_option("--hook-cost-scale", sweep_args.hook_cost_scale,
                      "Multiplier on module per-hook costs");

    StackArgs stack_args;
    auto* stack = app.add_subcommand("stack", "Whitelist stack evaluation");
    stack->add_option("--rules", stack_args.rules, "Rules files, comma separated")->required();
    stack->add_option("--requests", stack_args.requests, "Requests file")->required();
    stack->add_option("--order", stack_args.orders, "Stack order, e.g. A,B,C (repeatable)");
    stack->add_flag("--all-orders", stack_args.all_orders, "Evaluate every permutation");
    stack->add_option("--cache", stack_args.cache, "Per-module LRU cache capacity");
    stack->add_flag("!--no-cache-denials", stack_args.cache_denials, "Do not cache denials");
    stack->add_option("--repeat", stack_args.repeat, "Replay the request list k times");
    stack->add_option("--cost", stack_args.costs, "Per-module check cost, MODULE=UNITS");

    CgaArgs cga_args;
    auto* cga = app.add_subcommand("cga", "Static call-graph hook counting");
    cga->add_option("--graph", cga_args.graph, "Graph description file");
    cga->add_option("--modules", cga_args.modules, "Module descriptor (for synth/--trace)");
    cga->add_option("--syscall", cga_args.syscall, "Synthesize the graph for this syscall");
    cga->add_option("--entry", cga_args.entry, "Entry node (default: first node)");
    cga->add_option("--depths", cga_args.depths, "Depth or lo:hi range")
        ->capture_default_str();
    cga->add_flag("--show-edges", cga_args.show_edges, "Print the augmented edge set");
    cga->add_option("--trace", cga_args.trace_scenario,
                    "Scenario to compare dynamically (exit 3 when dynamic exceeds static)");

    ReportArgs report_args;
    auto* report = app.add_subcommand("report", "Regression-rate table from two sweeps");
    report->add_option("--baseline", report_args.baseline, "Baseline sweep CSV")->required();
    report->add_option("--target", report_args.target, "Target sweep CSV")->required();
    report->add_option("--metric", report_args.metric, "auto|latency|throughput")
        ->capture_default_str();

    auto* reproduce = app.add_subcommand(
        "reproduce", "Bundled recipes: depth slopes, benchmark slopes, stacking, toy graph");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitConfig;
    }

    try {
        if (sweep->parsed()) return run_sweep_cmd(opts, sweep_args);
        if (stack->parsed()) return run_stack_cmd(opts, stack_args);
        if (cga->parsed()) return run_cga_cmd(opts, cga_args);
        if (report->parsed()) return run_report_cmd(opts, report_args);
        if (reproduce->parsed()) return run_reproduce_cmd(opts);
        std::cerr << "error: no subcommand\n";
        return kExitConfig;
    } catch (const lsmsim::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return kExitInternal;
    }
}

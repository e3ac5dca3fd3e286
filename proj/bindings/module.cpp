// Python bindings for the core simulation and analysis operations.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "lsmsim/callgraph.hpp"
#include "lsmsim/errors.hpp"
#include "lsmsim/hook_model.hpp"
#include "lsmsim/latency_sim.hpp"
#include "lsmsim/regression.hpp"
#include "lsmsim/stacking.hpp"
#include "lsmsim/syscall_model.hpp"

namespace py = pybind11;
using namespace lsmsim;

namespace {

DecisionRuleSet rules_from_list(const std::vector<ModuleRules>& rules) {
    DecisionRuleSet set;
    for (const auto& r : rules) {
        set[r.module] = r;
    }
    return set;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Authorization-hook overhead simulator: descriptors, traces, "
              "stacking, delay sweeps, OLS and call-graph analysis";

    py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
    py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);
    py::register_exception<DegenerateInputError>(m, "DegenerateInputError",
                                                 PyExc_ArithmeticError);

    py::class_<PlacementFormula>(m, "PlacementFormula")
        .def(py::init<std::int64_t, std::int64_t>(), py::arg("per_depth") = 0,
             py::arg("constant") = 0)
        .def_readwrite("per_depth", &PlacementFormula::per_depth)
        .def_readwrite("constant", &PlacementFormula::constant);
    m.def("eval_placement", &eval_placement, py::arg("formula"), py::arg("depth"));

    py::class_<HookPoint>(m, "HookPoint")
        .def_readonly("id", &HookPoint::id)
        .def_property_readonly(
            "sso_category", [](const HookPoint& h) { return std::string(to_string(h.category)); })
        .def_readonly("is_authorization", &HookPoint::is_authorization);

    py::class_<SecurityModuleSpec>(m, "SecurityModuleSpec")
        .def_readonly("name", &SecurityModuleSpec::name)
        .def_readonly("hooks", &SecurityModuleSpec::hooks)
        .def("total_hooks", &SecurityModuleSpec::total_hooks)
        .def("file_accessing_hooks", &SecurityModuleSpec::file_accessing_hooks)
        .def("hook_count_by_category",
             [](const SecurityModuleSpec& spec, const std::string& category) {
                 return hook_count_by_category(spec, category);
             });
    m.def("load_module_spec", &load_module_spec, py::arg("descriptor_json"));
    m.def("load_module_spec_file", &load_module_spec_file, py::arg("path"));

    py::class_<PathSpec>(m, "PathSpec")
        .def(py::init([](const std::vector<std::string>& components, const std::string& kind) {
                 PathSpec p;
                 p.components = components;
                 p.kind = path_kind_from_string(kind);
                 return p;
             }),
             py::arg("components"), py::arg("kind") = "plain")
        .def_readwrite("components", &PathSpec::components)
        .def("depth", &PathSpec::depth);
    m.def("make_depth_path",
          [](std::int64_t depth, const std::string& kind) {
              return make_depth_path(depth, path_kind_from_string(kind));
          },
          py::arg("depth"), py::arg("kind") = "plain");

    py::class_<SyscallScenario>(m, "SyscallScenario")
        .def_readonly("name", &SyscallScenario::name)
        .def_readwrite("label", &SyscallScenario::label)
        .def_readonly("benchmark_class", &SyscallScenario::benchmark_class)
        .def_readwrite("path", &SyscallScenario::path)
        .def_readwrite("buffer_size_bytes", &SyscallScenario::buffer_size_bytes);
    m.def("load_scenario", &load_scenario, py::arg("scenario_json"));
    m.def("load_scenario_file", &load_scenario_file, py::arg("path"));
    m.def("benchmark_names", &benchmark_names);

    py::class_<TraceEntry>(m, "TraceEntry")
        .def_readonly("syscall", &TraceEntry::syscall)
        .def_readonly("hook_id", &TraceEntry::hook_id)
        .def_readonly("module", &TraceEntry::module)
        .def_readonly("is_authorization", &TraceEntry::is_authorization);

    py::class_<HookInvocationTrace>(m, "HookInvocationTrace")
        .def_readonly("entries", &HookInvocationTrace::entries)
        .def_readonly("authorization_count", &HookInvocationTrace::authorization_count)
        .def_readonly("total_hook_cost_ns", &HookInvocationTrace::total_hook_cost_ns)
        .def_readonly("transfer_bytes", &HookInvocationTrace::transfer_bytes);

    py::class_<BuildTraceOptions>(m, "BuildTraceOptions")
        .def(py::init<>())
        .def_readwrite("empty_dir_hooks", &BuildTraceOptions::empty_dir_hooks);
    m.def("build_trace", &build_trace, py::arg("scenario"), py::arg("stack"),
          py::arg("options") = BuildTraceOptions{});
    m.def("build_syscall_trace", &build_syscall_trace, py::arg("syscall"), py::arg("path"),
          py::arg("stack"), py::arg("options") = BuildTraceOptions{});
    m.def("invocation_histogram", &invocation_histogram, py::arg("trace"));
    m.def("dominant_hook_share", &dominant_hook_share, py::arg("histogram"));

    py::class_<ModuleRules>(m, "ModuleRules")
        .def(py::init([](const std::string& module, bool default_allow,
                         const std::set<std::string>& allow, const std::set<std::string>& deny) {
                 return ModuleRules{module, default_allow, allow, deny};
             }),
             py::arg("module"), py::arg("default_allow") = false,
             py::arg("allow") = std::set<std::string>{},
             py::arg("deny") = std::set<std::string>{})
        .def_readonly("module", &ModuleRules::module)
        .def("decide", &ModuleRules::decide);
    m.def("load_rules", &load_rules, py::arg("rules_json"));
    m.def("load_rules_file", &load_rules_file, py::arg("path"));

    py::class_<AccessRequest>(m, "AccessRequest")
        .def(py::init([](std::int64_t subject, const std::string& object, const std::string& op) {
                 return AccessRequest{subject, object, access_op_from_string(op)};
             }),
             py::arg("subject") = 0, py::arg("object") = std::string{},
             py::arg("op") = "open")
        .def_readonly("subject_label", &AccessRequest::subject_label)
        .def_readonly("object_id", &AccessRequest::object_id);

    py::class_<CacheConfig>(m, "CacheConfig")
        .def(py::init<std::size_t>(), py::arg("max_entries") = 512)
        .def_readwrite("max_entries", &CacheConfig::max_entries);

    py::class_<StackOptions>(m, "StackOptions")
        .def(py::init<>())
        .def_readwrite("cache", &StackOptions::cache)
        .def_readwrite("cache_denials", &StackOptions::cache_denials)
        .def_readwrite("cost_units", &StackOptions::cost_units);

    py::class_<Decision>(m, "Decision")
        .def_readonly("granted", &Decision::granted)
        .def_readonly("denied_by", &Decision::denied_by);

    py::class_<StackEvalReport>(m, "StackEvalReport")
        .def_readonly("decisions", &StackEvalReport::decisions)
        .def_readonly("checks_per_module", &StackEvalReport::checks_per_module)
        .def_readonly("cache_hits_per_module", &StackEvalReport::cache_hits_per_module)
        .def_readonly("total_cost_units", &StackEvalReport::total_cost_units)
        .def("granted_objects", &StackEvalReport::granted_objects);

    m.def("evaluate_stack",
          [](const std::vector<AccessRequest>& requests, const std::vector<std::string>& order,
             const std::vector<ModuleRules>& rules, const StackOptions& options) {
              return evaluate_stack(requests, order, rules_from_list(rules), options);
          },
          py::arg("requests"), py::arg("stack_order"), py::arg("rules"),
          py::arg("options") = StackOptions{});
    m.def("cached_reevaluate",
          [](const std::vector<AccessRequest>& requests, std::int64_t k,
             const std::vector<std::string>& order, const std::vector<ModuleRules>& rules,
             const StackOptions& options) {
              return cached_reevaluate(requests, k, order, rules_from_list(rules), options);
          },
          py::arg("requests"), py::arg("k"), py::arg("stack_order"), py::arg("rules"),
          py::arg("options") = StackOptions{});

    py::class_<LatencyModel>(m, "LatencyModel")
        .def(py::init<>())
        .def_readwrite("constant_cost_ns", &LatencyModel::constant_cost_ns)
        .def_readwrite("hooking_unit_cost_ns", &LatencyModel::hooking_unit_cost_ns)
        .def_readwrite("per_byte_transfer_ns", &LatencyModel::per_byte_transfer_ns)
        .def_readwrite("hook_cost_scale", &LatencyModel::hook_cost_scale);

    py::class_<TunableModuleSpec>(m, "TunableModuleSpec")
        .def(py::init<>())
        .def_readwrite("delay_us", &TunableModuleSpec::delay_us)
        .def_readwrite("default_label", &TunableModuleSpec::default_label);

    m.def("label_code", &label_code, py::arg("label"));
    m.def("assign_label", &assign_label, py::arg("object_id"), py::arg("label_rules"));
    m.def("simulate_latency", &simulate_latency, py::arg("trace"), py::arg("model"),
          py::arg("tunable"), py::arg("noise_draw") = 0.0);

    py::class_<SweepConfig>(m, "SweepConfig")
        .def(py::init<>())
        .def_readwrite("delays_us", &SweepConfig::delays_us)
        .def_readwrite("repetitions", &SweepConfig::repetitions)
        .def_readwrite("warmup_repetitions", &SweepConfig::warmup_repetitions)
        .def_readwrite("noise_stddev_ns", &SweepConfig::noise_stddev_ns)
        .def_readwrite("rng_seed", &SweepConfig::rng_seed)
        .def_readwrite("keep_raw", &SweepConfig::keep_raw)
        .def_static("default_grid", &SweepConfig::default_grid);
    m.attr("REFERENCE_NOISE_STDDEV_NS") = kReferenceNoiseStddevNs;

    py::class_<SweepPoint>(m, "SweepPoint")
        .def_readonly("delay_us", &SweepPoint::delay_us)
        .def_readonly("mean_ns", &SweepPoint::mean_ns)
        .def_readonly("variance_ns2", &SweepPoint::variance_ns2)
        .def_readonly("raw", &SweepPoint::raw);

    py::class_<SweepResult>(m, "SweepResult")
        .def_readonly("scenario_label", &SweepResult::scenario_label)
        .def_readonly("authorization_count", &SweepResult::authorization_count)
        .def_readonly("points", &SweepResult::points);

    m.def("run_sweep", &run_sweep, py::arg("scenario"), py::arg("stack"), py::arg("model"),
          py::arg("sweep"), py::arg("trace_options") = BuildTraceOptions{});

    py::class_<RegressionResult>(m, "RegressionResult")
        .def_readonly("coefficients", &RegressionResult::coefficients)
        .def_readonly("r_squared", &RegressionResult::r_squared)
        .def("intercept", &RegressionResult::intercept)
        .def("slope", &RegressionResult::slope, py::arg("i") = 0);
    m.def("fit_ols", &fit_ols, py::arg("x"), py::arg("y"));
    m.def("fit_multiple_ols", &fit_multiple_ols, py::arg("X"), py::arg("y"));

    py::class_<RegressionRate>(m, "RegressionRate")
        .def_readonly("baseline", &RegressionRate::baseline)
        .def_readonly("target", &RegressionRate::target)
        .def_readonly("rate", &RegressionRate::rate);
    m.def("regression_rate",
          [](double target, double baseline, const std::string& kind) {
              return regression_rate(target, baseline, metric_kind_from_string(kind));
          },
          py::arg("target"), py::arg("baseline"), py::arg("metric_kind") = "latency");

    py::class_<SlopeRow>(m, "SlopeRow")
        .def_readonly("scenario", &SlopeRow::scenario)
        .def_readonly("slope", &SlopeRow::slope)
        .def_readonly("intercept_ns", &SlopeRow::intercept_ns)
        .def_readonly("r_squared", &SlopeRow::r_squared);
    m.def("slope_report", &slope_report, py::arg("sweeps"));

    py::class_<HookAnnotation>(m, "HookAnnotation")
        .def_readonly("hook_id", &HookAnnotation::hook_id)
        .def_readonly("formula", &HookAnnotation::formula);

    py::class_<CallGraph>(m, "CallGraph")
        .def_readonly("nodes", &CallGraph::nodes)
        .def_readonly("call_edges", &CallGraph::call_edges)
        .def_readonly("seq_edges", &CallGraph::seq_edges)
        .def_readonly("hook_annotations", &CallGraph::hook_annotations)
        .def("all_edges", &CallGraph::all_edges);
    m.def("parse_callgraph", &parse_callgraph, py::arg("text"));
    m.def("parse_callgraph_file", &parse_callgraph_file, py::arg("path"));
    m.def("augment_sequence_edges", &augment_sequence_edges, py::arg("graph"));
    m.def("graph_from_module", &graph_from_module, py::arg("spec"), py::arg("syscall"));

    py::class_<HookCountReport>(m, "HookCountReport")
        .def_readonly("entry", &HookCountReport::entry)
        .def_readonly("depth", &HookCountReport::depth)
        .def_readonly("per_hook", &HookCountReport::per_hook)
        .def_readonly("total", &HookCountReport::total);
    m.def("count_hooks_worst_case", &count_hooks_worst_case, py::arg("graph"),
          py::arg("entry"), py::arg("depth"));

    py::class_<HookExcess>(m, "HookExcess")
        .def_readonly("hook_id", &HookExcess::hook_id)
        .def_readonly("dynamic_count", &HookExcess::dynamic_count)
        .def_readonly("static_count", &HookExcess::static_count);
    py::class_<ConsistencyVerdict>(m, "ConsistencyVerdict")
        .def_readonly("consistent", &ConsistencyVerdict::consistent)
        .def_readonly("excesses", &ConsistencyVerdict::excesses);
    m.def("compare_static_dynamic", &compare_static_dynamic, py::arg("report"),
          py::arg("trace"));
}

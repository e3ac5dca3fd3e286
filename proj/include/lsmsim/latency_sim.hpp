#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "lsmsim/syscall_model.hpp"

namespace lsmsim {

/// End-to-end latency synthesis: constant cost + hooking cost + tunable
/// authorization delay + data transfer, with optional additive noise.
struct LatencyModel {
    double constant_cost_ns = 0.0;       // the constant term
    double hooking_unit_cost_ns = 0.0;   // uniform per-firing cost on top of module costs
    double per_byte_transfer_ns = 0.0;   // read/write/copy buffer cost
    double hook_cost_scale = 1.0;        // multiplier on module-declared per-hook costs
};

/// The delay-injecting dummy module: its two authorization interfaces wait
/// delay_us before granting.
struct TunableModuleSpec {
    double delay_us = 0.0;
    std::string default_label = "ignored";
};

/// Security tag codes: trusted 0, untrusted 1, ignored 2 (the default).
std::int64_t label_code(std::string_view label);

/// Label rules map an object id to a label string; unmatched objects get
/// the default tag "ignored" (2). Throws on an unknown label string.
std::int64_t assign_label(const std::string& object_id,
                          const std::map<std::string, std::string>& label_rules);

/// Latency of one scenario execution given its trace:
///   constant + hook costs + authorization_count * delay + transfer + noise.
double simulate_latency(const HookInvocationTrace& trace, const LatencyModel& model,
                        const TunableModuleSpec& tunable, double noise_draw = 0.0);

struct SweepConfig {
    std::vector<double> delays_us;   // strictly increasing grid
    std::int64_t repetitions = 300;
    std::int64_t warmup_repetitions = 0;  // discarded before statistics
    double noise_stddev_ns = 0.0;
    std::uint64_t rng_seed = 0;
    bool keep_raw = false;

    static std::vector<double> default_grid();  // 0, 10, ..., 110 us
};

/// Per-sample noise stddev that lands the reference fits near R^2 = 0.999
/// with 300-repetition means.
inline constexpr double kReferenceNoiseStddevNs = 35000.0;

struct SweepPoint {
    double delay_us = 0.0;
    double mean_ns = 0.0;
    double variance_ns2 = 0.0;
    std::vector<double> raw;  // populated when keep_raw
};

struct SweepResult {
    std::string scenario_label;
    std::int64_t authorization_count = 0;
    std::vector<SweepPoint> points;
};

/// Runs `repetitions` simulations per grid delay and records mean/variance.
/// Deterministic given rng_seed: each (delay index, repetition) draws from
/// its own derived stream, so results do not depend on execution order.
SweepResult run_sweep(const SyscallScenario& scenario,
                      const std::vector<SecurityModuleSpec>& stack, const LatencyModel& model,
                      const SweepConfig& sweep, const BuildTraceOptions& trace_options = {});

/// Same, for a prebuilt trace (the scenario label is caller-provided).
SweepResult run_sweep_trace(const HookInvocationTrace& trace, const std::string& label,
                            const LatencyModel& model, const SweepConfig& sweep);

}  // namespace lsmsim

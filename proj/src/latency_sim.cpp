#include "lsmsim/latency_sim.hpp"

#include <cmath>
#include <random>

#include "lsmsim/errors.hpp"

namespace lsmsim {

namespace {

// splitmix64; decorrelates the per-sample streams derived from
// (seed, delay index, repetition index).
std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t sample_seed(std::uint64_t seed, std::uint64_t delay_index,
                          std::uint64_t repetition) {
    return mix64(mix64(mix64(seed) ^ delay_index) ^ repetition);
}

}  // namespace

std::int64_t label_code(std::string_view label) {
    if (label == "trusted") return 0;
    if (label == "untrusted") return 1;
    if (label == "ignored") return 2;
    throw ValidationError("unknown security label: " + std::string(label));
}

std::int64_t assign_label(const std::string& object_id,
                          const std::map<std::string, std::string>& label_rules) {
    auto it = label_rules.find(object_id);
    if (it == label_rules.end()) {
        return label_code("ignored");
    }
    return label_code(it->second);
}

double simulate_latency(const HookInvocationTrace& trace, const LatencyModel& model,
                        const TunableModuleSpec& tunable, double noise_draw) {
    const double hooking = model.hook_cost_scale * trace.total_hook_cost_ns +
                           model.hooking_unit_cost_ns * static_cast<double>(trace.entries.size());
    const double authorization =
        static_cast<double>(trace.authorization_count) * tunable.delay_us * 1000.0;
    const double transfer =
        static_cast<double>(trace.transfer_bytes) * model.per_byte_transfer_ns;
    return model.constant_cost_ns + hooking + authorization + transfer + noise_draw;
}

std::vector<double> SweepConfig::default_grid() {
    std::vector<double> grid;
    for (int d = 0; d <= 110; d += 10) {
        grid.push_back(static_cast<double>(d));
    }
    return grid;
}

SweepResult run_sweep_trace(const HookInvocationTrace& trace, const std::string& label,
                            const LatencyModel& model, const SweepConfig& sweep) {
    if (sweep.delays_us.empty()) {
        throw ValidationError("sweep grid must be nonempty");
    }
    for (std::size_t i = 1; i < sweep.delays_us.size(); ++i) {
        if (sweep.delays_us[i] <= sweep.delays_us[i - 1]) {
            throw ValidationError("sweep grid must be strictly increasing");
        }
    }
    if (sweep.repetitions < 1) {
        throw ValidationError("sweep repetitions must be >= 1");
    }
    if (sweep.warmup_repetitions < 0) {
        throw ValidationError("sweep warmup must be nonnegative");
    }

    SweepResult result;
    result.scenario_label = label;
    result.authorization_count = trace.authorization_count;
    result.points.reserve(sweep.delays_us.size());

    TunableModuleSpec tunable;
    for (std::size_t delay_index = 0; delay_index < sweep.delays_us.size(); ++delay_index) {
        tunable.delay_us = sweep.delays_us[delay_index];
        SweepPoint point;
        point.delay_us = tunable.delay_us;

        // Welford keeps the zero-noise variance exactly 0.
        double mean = 0.0;
        double m2 = 0.0;
        std::int64_t n = 0;
        const std::int64_t total = sweep.warmup_repetitions + sweep.repetitions;
        for (std::int64_t rep = 0; rep < total; ++rep) {
            double noise = 0.0;
            if (sweep.noise_stddev_ns > 0.0) {
                std::mt19937_64 gen(sample_seed(sweep.rng_seed, delay_index,
                                                static_cast<std::uint64_t>(rep)));
                std::normal_distribution<double> dist(0.0, sweep.noise_stddev_ns);
                noise = dist(gen);
            }
            const double sample = simulate_latency(trace, model, tunable, noise);
            if (rep < sweep.warmup_repetitions) {
                continue;
            }
            ++n;
            const double delta = sample - mean;
            mean += delta / static_cast<double>(n);
            m2 += delta * (sample - mean);
            if (sweep.keep_raw) {
                point.raw.push_back(sample);
            }
        }
        point.mean_ns = mean;
        point.variance_ns2 = m2 / static_cast<double>(n);
        result.points.push_back(std::move(point));
    }
    return result;
}

SweepResult run_sweep(const SyscallScenario& scenario,
                      const std::vector<SecurityModuleSpec>& stack, const LatencyModel& model,
                      const SweepConfig& sweep, const BuildTraceOptions& trace_options) {
    const HookInvocationTrace trace = build_trace(scenario, stack, trace_options);
    return run_sweep_trace(trace, scenario.label, model, sweep);
}

}  // namespace lsmsim

#pragma once

#include <array>
#include <filesystem>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "cmanet/metrics.hpp"
#include "cmanet/network.hpp"
#include "cmanet/rng.hpp"
#include "cmanet/scenario.hpp"
#include "cmanet/simd/kernels.hpp"
#include "cmanet/trace.hpp"

namespace cmanet {

/// Per-device link state sampled at every tick; the alphabet of the
/// device-state Markov chain.
enum class LinkState { Isolated = 0, InRange = 1, Connected = 2 };

struct Summary {
    metrics::ThroughputByType throughput_mbps{};
    std::array<double, 4> window_s{};      // measurement window per data type
    std::vector<double> interval_scores;   // one transmission score per interval
    double transmission_score = 0.0;       // mean of interval_scores
    double chain_entropy_bits = 0.0;
    double chain_entropy_trits = 0.0;
    double symbol_entropy_trits = 0.0;
    double connectivity_prob = 0.0;
    int gateway_changes = 0;
    int delivered = 0;
    int failed = 0;
    int relays_delivered = 0;
    int relays_failed = 0;
    int handshake_timeouts = 0;
};

struct MetricRow {
    std::string metric;
    std::string scenario;
    double epsilon_k = 0.0;
    int devices = 0;
    double value = 0.0;
};

struct RunResult {
    ScenarioConfig config;
    std::string trace;   // JSON lines
    std::string digest;  // SHA-256 of `trace`
    Summary summary;
    std::vector<MetricRow> metrics;
    std::string kernels;  // name of the SIMD table used
};

struct RunOptions {
    /// Kernel table override; nullptr selects simd::active_kernels().
    const simd::KernelTable* kernels = nullptr;
    /// Called once per device per tick after its mobility draws. Lets tests
    /// consume extra numbers from one device's stream.
    std::function<void(DeviceIndex, RandomStream&)> tick_hook;
};

/// Runs one scenario to completion. Throws ValidationError for an invalid
/// config. Identical (config, seed) give byte-identical traces.
RunResult run(const ScenarioConfig& config, const RunOptions& options = {});

/// Rebuilds the summary from trace bytes alone plus the config.
Summary summarize_trace(std::string_view trace, const ScenarioConfig& config);

/// Protocol invariants checked over a trace: phase order, handshake
/// causality, blacklist exclusion, gateway-backed relays, monotone clock.
/// Empty when the trace conforms.
std::vector<std::string> audit_trace(std::string_view trace);

std::vector<MetricRow> metric_rows(const ScenarioConfig& config, const Summary& summary);
std::string metrics_csv(const std::vector<MetricRow>& rows, bool header = true);
/// Inverse of metrics_csv. Throws ValidationError on malformed input.
std::vector<MetricRow> parse_metrics_csv(std::string_view text);

Json summary_json(const Summary& summary);

/// Writes trace.jsonl, metrics.csv and summary.json under `dir`.
void write_artifacts(const RunResult& result, const std::filesystem::path& dir);

}  // namespace cmanet

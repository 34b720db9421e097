#pragma once

#include <forksim/metrics/anomaly.hpp>
#include <forksim/metrics/trace.hpp>
#include <forksim/scenario/script.hpp>

#include <cstdint>

namespace forksim::scenario {

struct RunOptions {
    /// Log every message send, hold and delivery.
    bool record_messages = true;
};

struct RunResult {
    metrics::RunTrace trace;
    metrics::AnomalyReport report;
    metrics::RunMetrics metrics;
};

/// Runs `script` to its stop condition. Deterministic in (script, seed).
/// Throws ScenarioError if the script does not validate.
RunResult run(const ScenarioScript& script, std::uint64_t seed, const RunOptions& opts = {});

} // namespace forksim::scenario

#pragma once

#include <forksim/metrics/anomaly.hpp>
#include <forksim/metrics/trace.hpp>

#include <json.hpp>

#include <cstdint>
#include <string>

namespace forksim::metrics {

/// Identifies the inputs of a run; stands in for timestamps in reports.
struct Provenance {
    std::string scenario;
    std::string scenario_sha256;
    std::uint64_t seed = 0;
    std::uint64_t difficulty = 0;
    std::uint64_t k = 0;
};

nlohmann::ordered_json report_json(const RunTrace& trace, const AnomalyReport& report,
                                   const RunMetrics& metrics, const Provenance& prov);

std::string metrics_csv_header();
std::string metrics_csv_row(std::size_t run_id, std::uint64_t seed, std::uint64_t difficulty,
                            std::uint64_t k, const RunMetrics& m);

/// Fixed six-decimal formatting used in every CSV.
std::string fixed6(double v);

} // namespace forksim::metrics

#pragma once

#include <forksim/metrics/anomaly.hpp>
#include <forksim/scenario/script.hpp>

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace forksim::scenario {

struct RunJob {
    std::shared_ptr<const ScenarioScript> script;
    std::uint64_t seed = 0;
    std::size_t run_id = 0;
};

/// Compact outcome of one run, small enough to keep thousands.
struct RunSummary {
    std::size_t run_id = 0;
    std::uint64_t seed = 0;
    std::uint64_t difficulty = 0;
    std::uint64_t k = 0;
    metrics::RunMetrics metrics;
    std::size_t double_spends = 0;
    std::uint64_t final_height = 0;
    bool converged = false;
    std::uint64_t ledger_checks = 0;
    std::uint64_t ledger_mismatches = 0;
    std::string stop_reason;

    bool operator==(const RunSummary&) const;
};

RunSummary summarize(const RunJob& job);

/// Reference implementation: one run after another.
std::vector<RunSummary> run_batch_serial(const std::vector<RunJob>& jobs);

/// OpenMP fan-out over independent runs. Output order matches `jobs`, so the
/// result equals run_batch_serial bit for bit.
std::vector<RunSummary> run_batch_parallel(const std::vector<RunJob>& jobs);

struct DifficultyAggregate {
    std::uint64_t difficulty = 0;
    std::size_t runs = 0;
    std::size_t swaps = 0;
    double swap_frequency = 0.0;
    std::optional<double> mean_termination_s;
    std::optional<double> mean_dissemination_s;
};

struct SweepResult {
    std::vector<RunSummary> runs; // ordered by (difficulty, seed)
    std::vector<DifficultyAggregate> per_difficulty;
    double overall_swap_frequency = 0.0;
    double swap_spearman = 0.0;      // difficulty vs swap frequency
    double termination_r2 = 0.0;     // linear fit of mean termination on difficulty
    double dissemination_ratio = 0.0; // max / min of mean dissemination
};

std::vector<RunJob> sweep_jobs(const ScenarioScript& base, const std::vector<std::uint64_t>& difficulties,
                               std::size_t runs_per_difficulty, std::uint64_t seed_base);

/// Pure fold over summaries; order-independent up to the sort it performs.
SweepResult aggregate(std::vector<RunSummary> runs);

SweepResult sweep(const ScenarioScript& base, const std::vector<std::uint64_t>& difficulties,
                  std::size_t runs_per_difficulty, std::uint64_t seed_base, bool parallel = true);

std::string sweep_csv(const SweepResult& r);

} // namespace forksim::scenario

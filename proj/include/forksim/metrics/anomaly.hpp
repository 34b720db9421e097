#pragma once

#include <forksim/metrics/trace.hpp>

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace forksim::metrics {

struct SwapFinding {
    TxId first;
    TxId second;
    std::optional<std::size_t> commit_entry; // Commit of `first` logged before `second` was issued
    std::optional<std::size_t> issue_entry;  // TxIssued of `second`
    std::optional<std::uint64_t> first_final_height;
    std::optional<std::uint64_t> second_final_height;
    bool swap = false;
};

struct UncommitFinding {
    TxId tx;
    NodeId node;
    SimTime commit_time;
    std::uint64_t commit_height = 0;
    std::size_t commit_entry = 0;
    std::string final_status = "absent";
};

struct DoubleSpendFinding {
    Address address;
    std::size_t redemption_count = 0;
    Coins redeemed = 0;
    Coins max_available = 0;
    std::vector<std::size_t> redemption_entries;
};

struct AnomalyReport {
    std::vector<SwapFinding> pairs; // one per scripted pair
    std::vector<UncommitFinding> uncommits;
    std::vector<DoubleSpendFinding> double_spends;

    bool any_swap() const;
};

struct RunMetrics {
    bool swap = false;
    std::size_t uncommit_count = 0;
    std::optional<std::uint64_t> t2_final_height;
    std::optional<double> termination_time_s;
    std::optional<double> dissemination_time_s;
    bool dissemination_withheld = false;
};

/// Final height of tx in `chain`, if present.
std::optional<std::uint64_t> height_in(std::span<const BlockPtr> chain, const TxId& tx);

SwapFinding detect_swap(std::span<const sim::LogEntry> log, std::span<const BlockPtr> final_chain,
                        const TxId& t1, const TxId& t2);

std::vector<UncommitFinding> detect_uncommit(std::span<const sim::LogEntry> log,
                                             std::span<const BlockPtr> final_chain);

std::vector<DoubleSpendFinding> detect_double_spend(const RunTrace& trace);

AnomalyReport analyze(const RunTrace& trace);

RunMetrics compute_metrics(const RunTrace& trace, const AnomalyReport& report);

/// Seconds from each TxIssued to the first Commit of that tx at the issuing node.
std::vector<double> commit_latencies(std::span<const sim::LogEntry> log);

} // namespace forksim::metrics

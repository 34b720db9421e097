#pragma once

#include <forksim/chain/types.hpp>
#include <forksim/sim/sim_time.hpp>

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace forksim::sim {

enum class LogKind {
    StepFired,
    TxIssued,
    TxRejected,
    BlockMined,
    BlockAnnounced,
    MessageSent,
    MessageHeld,
    MessageDelivered,
    BlockAccepted,
    BlockRejected,
    HeadChanged,
    Reorg,
    Commit,
    Uncommit,
    GoodsRedeemed,
    OffchainCheck,
    Partition,
    Heal,
    MiningStarted,
    MiningStopped,
    AttackStarted,
    AttackReleased,
    AttackAbandoned,
    Halt,
};

const char* to_string(LogKind k);
std::optional<LogKind> log_kind_from_string(const std::string& s);

/// One row of the global event log. Unused fields stay empty.
struct LogEntry {
    SimTime at;
    LogKind kind = LogKind::StepFired;
    NodeId node;
    NodeId peer;
    TxId tx;
    Digest block;
    std::optional<std::uint64_t> height;
    std::optional<std::int64_t> value;
    std::string detail;

    bool operator==(const LogEntry&) const = default;
};

/// Append-only, shared by every actor of one run.
class EventLog {
public:
    std::size_t append(LogEntry e) {
        entries_.push_back(std::move(e));
        return entries_.size() - 1;
    }
    const std::vector<LogEntry>& entries() const { return entries_; }
    std::size_t size() const { return entries_.size(); }
    const LogEntry& operator[](std::size_t i) const { return entries_[i]; }

    /// When false, high-volume message entries are skipped.
    bool record_messages = true;

private:
    std::vector<LogEntry> entries_;
};

/// "<time> <kind> key=value ..." with empty fields omitted.
std::string format_line(const LogEntry& e);
void write_trace(std::ostream& out, const std::vector<LogEntry>& entries);

} // namespace forksim::sim

#include <forksim/sim/event_log.hpp>

#include <array>
#include <ostream>

namespace forksim::sim {

namespace {

constexpr std::array kNames = {
    "StepFired",     "TxIssued",      "TxRejected",      "BlockMined",  "BlockAnnounced",
    "MessageSent",   "MessageHeld",   "MessageDelivered", "BlockAccepted", "BlockRejected",
    "HeadChanged",   "Reorg",         "Commit",          "Uncommit",    "GoodsRedeemed",
    "OffchainCheck", "Partition",     "Heal",            "MiningStarted", "MiningStopped",
    "AttackStarted", "AttackReleased", "AttackAbandoned", "Halt",
};

static_assert(kNames.size() == static_cast<std::size_t>(LogKind::Halt) + 1);

} // namespace

const char* to_string(LogKind k) { return kNames[static_cast<std::size_t>(k)]; }

std::optional<LogKind> log_kind_from_string(const std::string& s) {
    for (std::size_t i = 0; i < kNames.size(); ++i)
        if (s == kNames[i]) return static_cast<LogKind>(i);
    return std::nullopt;
}

std::string format_line(const LogEntry& e) {
    std::string s = e.at.str();
    s += ' ';
    s += to_string(e.kind);
    if (!e.node.empty()) s += " node=" + e.node;
    if (!e.peer.empty()) s += " peer=" + e.peer;
    if (!e.tx.empty()) s += " tx=" + e.tx;
    if (!e.block.is_zero()) s += " block=" + e.block.short_hex();
    if (e.height) s += " height=" + std::to_string(*e.height);
    if (e.value) s += " value=" + std::to_string(*e.value);
    if (!e.detail.empty()) s += " detail=\"" + e.detail + "\"";
    return s;
}

void write_trace(std::ostream& out, const std::vector<LogEntry>& entries) {
    for (const auto& e : entries) out << format_line(e) << '\n';
}

} // namespace forksim::sim

#pragma once

#include <forksim/chain/block.hpp>
#include <forksim/chain/transaction.hpp>
#include <forksim/sim/event_log.hpp>

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace forksim::metrics {

struct NodeSummary {
    NodeId id;
    std::uint64_t height = 0;
    Digest head;
    std::uint64_t blocks_mined = 0;
    std::uint64_t ledger_checks = 0;
    std::uint64_t ledger_mismatches = 0;
};

/// Everything a finished run leaves behind for post-hoc analysis.
struct RunTrace {
    std::string scenario;
    std::uint64_t seed = 0;
    std::uint64_t difficulty = 0;
    std::uint64_t k = 0;

    std::vector<sim::LogEntry> log;
    std::vector<BlockPtr> final_chain;
    NodeId observer;
    bool converged = false;
    std::vector<NodeSummary> nodes;
    SimTime end_time;
    std::string stop_reason;

    /// Scripted (first, second) pairs where issuing `second` waits on a
    /// commit of `first`.
    std::vector<std::pair<TxId, TxId>> pairs;
    std::set<Address> goods_sinks;
    std::map<TxId, TxPtr> txs; // every issued transaction
    /// Largest balance per address over every ledger state any node computed.
    std::map<Address, Coins> max_available;
};

} // namespace forksim::metrics

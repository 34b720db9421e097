#pragma once

#include <forksim/chain/transaction.hpp>

#include <cstdint>
#include <map>
#include <vector>

namespace forksim::node {

/// Pending transactions keyed by id, remembering arrival order.
class TxPool {
public:
    bool add(TxPtr tx);
    bool erase(const TxId& id);
    bool contains(const TxId& id) const { return by_id_.contains(id); }
    std::size_t size() const { return by_id_.size(); }
    bool empty() const { return by_id_.empty(); }

    /// Candidate order for block assembly: issue time, then sender and
    /// sequence, then arrival.
    std::vector<TxPtr> ordered() const;

private:
    struct Slot {
        TxPtr tx;
        std::uint64_t arrival;
    };
    std::map<TxId, Slot> by_id_;
    std::uint64_t next_ = 0;
};

} // namespace forksim::node

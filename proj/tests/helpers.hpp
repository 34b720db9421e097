#pragma once

#include <forksim/chain/block.hpp>
#include <forksim/chain/transaction.hpp>

#include <memory>
#include <string>
#include <vector>

namespace forksim::test {

inline TxPtr transfer(const std::string& id, const Address& from, const Address& to, Coins amount,
                      std::uint64_t seq, double issued_s = 0.0) {
    return std::make_shared<const Transaction>(
        Transaction{id, from, Transfer{to, amount}, seq, SimTime::from_seconds(issued_s)});
}

inline TxPtr call(const std::string& id, const Address& from, ContractCall c, std::uint64_t seq) {
    return std::make_shared<const Transaction>(Transaction{id, from, std::move(c), seq, {}});
}

inline BlockPtr child(const BlockPtr& parent, const NodeId& miner, std::vector<TxPtr> txs = {},
                      std::uint64_t nonce = 0) {
    Block b;
    b.height = parent->height + 1;
    b.parent_hash = parent->self_hash;
    b.miner = miner;
    b.txs = std::move(txs);
    b.difficulty = 0x400;
    b.mined_at = SimTime::from_micros(static_cast<std::int64_t>(b.height) * 1000);
    b.nonce = nonce;
    return seal(std::move(b));
}

} // namespace forksim::test

#pragma once

#include <forksim/chain/transaction.hpp>
#include <forksim/chain/types.hpp>
#include <forksim/sim/sim_time.hpp>

#include <cstdint>
#include <memory>
#include <vector>

namespace forksim {

struct Block {
    std::uint64_t height = 0;
    Digest parent_hash;
    Digest self_hash;
    NodeId miner;
    std::vector<TxPtr> txs;
    std::uint64_t difficulty = 1;
    SimTime mined_at;
    std::uint64_t nonce = 0;
};

using BlockPtr = std::shared_ptr<const Block>;

/// Canonical header serialization (format documented in docs/serialization.md).
std::vector<std::uint8_t> serialize_header(const Block& b);

/// SHA-256 over serialize_header(b). Ignores b.self_hash.
Digest digest(const Block& b);

/// Computes and stores self_hash.
BlockPtr seal(Block b);

/// The fixed genesis block shared by every scenario.
BlockPtr make_genesis();

} // namespace forksim

#pragma once

#include <forksim/chain/block.hpp>
#include <forksim/chain/transaction.hpp>
#include <forksim/chain/types.hpp>

#include <string>
#include <variant>
#include <vector>

namespace forksim::sim {

struct NewTx {
    TxPtr tx;
};

/// Parent-linked blocks ending at the sender's tip.
struct NewChainSegment {
    std::vector<BlockPtr> blocks;
};

/// Asks the peer for the blocks of `tip` above the deepest locator entry it
/// shares. The locator is the requester's canonical chain.
struct AncestorRequest {
    Digest tip;
    std::vector<Digest> locator;
};

struct Message {
    std::variant<NewTx, NewChainSegment, AncestorRequest> body;

    const NewTx* new_tx() const { return std::get_if<NewTx>(&body); }
    const NewChainSegment* segment() const { return std::get_if<NewChainSegment>(&body); }
    const AncestorRequest* ancestor_request() const { return std::get_if<AncestorRequest>(&body); }

    /// Short description for the event log.
    std::string describe() const;
};

} // namespace forksim::sim

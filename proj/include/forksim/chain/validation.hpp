#pragma once

#include <forksim/chain/block_tree.hpp>
#include <forksim/chain/ledger.hpp>

#include <optional>
#include <vector>

namespace forksim {

enum class BlockVerdict { Accept, Duplicate, UnknownParent, BadHeight, BadHash, InvalidTx };

const char* to_string(BlockVerdict v);

struct Validation {
    BlockVerdict verdict = BlockVerdict::Accept;
    std::optional<BlockRejection> rejection; // set for InvalidTx
    LedgerState state;                       // post-state when accepted
    std::vector<TxReceipt> receipts;

    bool accepted() const { return verdict == BlockVerdict::Accept; }
};

/// Validates b against the ledger state at its parent.
Validation validate_block(const Block& b, const BlockTree& tree, const LedgerState& parent_state,
                          const ChainParams& params);

/// Same, replaying the parent's chain from genesis to obtain its state.
Validation validate_block(const Block& b, const BlockTree& tree, const ChainParams& params);

} // namespace forksim

#pragma once

#include <forksim/chain/block.hpp>
#include <forksim/chain/transaction.hpp>
#include <forksim/chain/types.hpp>
#include <forksim/contracts/contracts.hpp>

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace forksim {

struct ChainParams {
    Allocation genesis;
    Coins block_reward = 0;
};

struct LedgerState {
    std::map<Address, Coins> balances;
    std::map<ContractId, contracts::ContractState> contracts;
    std::map<Address, std::uint64_t> last_seq;

    Coins balance(const Address& a) const;
    Coins total() const;
    bool operator==(const LedgerState&) const = default;

    static LedgerState from_genesis(const Allocation& alloc);
};

enum class TxError {
    BadAmount,
    InsufficientFunds,
    StaleSequence,
    UnknownContract,
    ContractExists,
    InsufficientSignatures,
};

const char* to_string(TxError e);

/// Outcome of applying one included transaction.
struct TxReceipt {
    TxId tx;
    std::uint64_t height = 0;
    std::string function; // "transfer", "multisig", or the contract function
    ContractId contract;
    Coins amount = 0;
    bool success = true;   // false for a contract throw
    bool effective = true; // whether any state other than the sequence changed
    std::string reason;
};

/// Whether `tx` may be included on top of `state`. Checks run in the order
/// amount, contract existence, signatures, funds, sequence.
std::optional<TxError> check_tx(const LedgerState& state, const Transaction& tx);

/// Applies a transaction that passed check_tx. Contract throws are included
/// but leave contract state unchanged.
TxReceipt apply_tx(LedgerState& state, const Transaction& tx, std::uint64_t height);

struct BlockRejection {
    TxId tx;
    TxError error;
};

/// Applies every transaction of b in order; on the first invalid one returns
/// the rejection and leaves `state` partially updated (callers pass a copy).
std::optional<BlockRejection> apply_block(LedgerState& state, const Block& b,
                                          const ChainParams& params,
                                          std::vector<TxReceipt>* receipts = nullptr);

/// Replays a genesis-rooted chain. Throws std::logic_error on a structurally
/// invalid chain or an invalid transaction.
LedgerState apply_chain(std::span<const BlockPtr> chain, const ChainParams& params,
                        std::vector<TxReceipt>* receipts = nullptr);

} // namespace forksim

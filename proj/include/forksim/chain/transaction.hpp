#pragma once

#include <forksim/chain/types.hpp>
#include <forksim/sim/sim_time.hpp>

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace forksim {

struct Transfer {
    Address recipient;
    Coins amount = 0;
    bool operator==(const Transfer&) const = default;
};

enum class ContractKind {
    Conditional,     // check and transfer in one on-chain function
    OffchainChecked, // check exposed as a read-only query, transfer unconditional
};

/// Initial state of a contract created by a "deploy" call.
struct ContractTemplate {
    ContractKind kind = ContractKind::Conditional;
    Address party_a;
    Address party_b;
    std::map<Address, Coins> balances;
    bool operator==(const ContractTemplate&) const = default;
};

/// Call of `function` on `contract`. Functions are "deploy", "sendTo" and
/// "sendIfReceived"; the latter two take (recipient, amount).
struct ContractCall {
    ContractId contract;
    std::string function;
    Address recipient;
    Coins amount = 0;
    std::optional<ContractTemplate> deploy;
    bool operator==(const ContractCall&) const = default;
};

/// One atomic payment debiting several inputs. Eligible signers are the input
/// owners plus the arbiter; `threshold` distinct eligible signatures are needed.
struct MultisigJoint {
    std::vector<std::pair<Address, Coins>> inputs;
    Address recipient;
    Address arbiter;
    std::set<Address> signatures;
    std::uint32_t threshold = 2;
    bool operator==(const MultisigJoint&) const = default;
};

using TxKind = std::variant<Transfer, ContractCall, MultisigJoint>;

struct Transaction {
    TxId id;
    Address sender;
    TxKind kind;
    std::uint64_t client_seq = 0;
    SimTime issue_time;

    bool operator==(const Transaction&) const = default;

    const Transfer* transfer() const { return std::get_if<Transfer>(&kind); }
    const ContractCall* call() const { return std::get_if<ContractCall>(&kind); }
    const MultisigJoint* multisig() const { return std::get_if<MultisigJoint>(&kind); }
};

using TxPtr = std::shared_ptr<const Transaction>;

std::string kind_name(const Transaction& tx);

} // namespace forksim

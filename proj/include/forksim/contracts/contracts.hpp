#pragma once

#include <forksim/chain/transaction.hpp>
#include <forksim/chain/types.hpp>

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace forksim::contracts {

/// State of one conditional-payment contract. `balances` is the contract's
/// internal ledger and is separate from account balances.
struct ContractState {
    ContractId id;
    ContractKind kind = ContractKind::Conditional;
    Address party_a;
    Address party_b;
    Coins paid = 0;
    std::map<Address, Coins> balances;

    bool operator==(const ContractState&) const = default;
};

struct StateDelta {
    std::vector<std::pair<Address, Coins>> balance_changes;
    std::optional<Coins> paid;
    bool empty() const { return balance_changes.empty() && !paid; }
    bool operator==(const StateDelta&) const = default;
};

struct ContractCallResult {
    bool success = false;
    StateDelta state_delta; // empty when success is false
    std::string reason;     // why the call threw, or "" on success
};

ContractState instantiate(const ContractId& id, const ContractTemplate& tpl);

/// Party A pays `recipient` from its contract balance and records the amount.
/// Insufficient balance is a silent no-op, not a throw.
ContractCallResult send_to(ContractState& c, const Address& caller, const Address& recipient,
                           Coins amount);

/// Party B pays `recipient`. For Conditional contracts the transfer runs only
/// when paid > amount (strict); OffchainChecked contracts transfer unconditionally.
ContractCallResult send_if_received(ContractState& c, const Address& caller,
                                    const Address& recipient, Coins amount);

/// Read-only query evaluated against some node's current state.
bool check_payment(const ContractState& c, Coins amount);

/// Dispatches on call.function. Unknown functions throw.
ContractCallResult execute(ContractState& c, const Address& caller, const ContractCall& call);

enum class MultisigError { None, BadAmount, InsufficientSignatures, InsufficientFunds };

const char* to_string(MultisigError e);

/// Validity of a joint payment against account balances.
MultisigError check_multisig(const MultisigJoint& tx, const std::map<Address, Coins>& balances);

/// Debits every input and credits the recipient atomically. Fails without any
/// change when check_multisig rejects.
ContractCallResult multisig_joint_payment(std::map<Address, Coins>& balances,
                                          const MultisigJoint& tx);

} // namespace forksim::contracts

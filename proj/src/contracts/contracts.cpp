#include <forksim/contracts/contracts.hpp>

namespace forksim::contracts {

namespace {

ContractCallResult thrown(std::string reason) { return {false, {}, std::move(reason)}; }

void move_internal(ContractState& c, StateDelta& delta, const Address& from, const Address& to,
                   Coins amount) {
    c.balances[from] -= amount;
    c.balances[to] += amount;
    delta.balance_changes.emplace_back(from, -amount);
    delta.balance_changes.emplace_back(to, amount);
}

Coins balance_of(const ContractState& c, const Address& a) {
    auto it = c.balances.find(a);
    return it == c.balances.end() ? 0 : it->second;
}

} // namespace

ContractState instantiate(const ContractId& id, const ContractTemplate& tpl) {
    ContractState c;
    c.id = id;
    c.kind = tpl.kind;
    c.party_a = tpl.party_a;
    c.party_b = tpl.party_b;
    c.balances = tpl.balances;
    return c;
}

ContractCallResult send_to(ContractState& c, const Address& caller, const Address& recipient,
                           Coins amount) {
    if (caller != c.party_a) return thrown("onlyFrom(A)");
    ContractCallResult r{true, {}, {}};
    if (amount >= 0 && balance_of(c, c.party_a) >= amount) {
        move_internal(c, r.state_delta, c.party_a, recipient, amount);
        c.paid = amount;
        r.state_delta.paid = amount;
    }
    return r;
}

ContractCallResult send_if_received(ContractState& c, const Address& caller,
                                    const Address& recipient, Coins amount) {
    if (caller != c.party_b) return thrown("onlyFrom(B)");
    if (amount < 0) return thrown("negative amount");
    if (c.kind == ContractKind::Conditional && !(c.paid > amount)) return thrown("paid <= amount");
    // unsigned underflow in the original; modeled as a revert
    if (balance_of(c, c.party_b) < amount) return thrown("balance underflow");
    ContractCallResult r{true, {}, {}};
    move_internal(c, r.state_delta, c.party_b, recipient, amount);
    return r;
}

bool check_payment(const ContractState& c, Coins amount) { return c.paid > amount; }

ContractCallResult execute(ContractState& c, const Address& caller, const ContractCall& call) {
    if (call.function == "sendTo") return send_to(c, caller, call.recipient, call.amount);
    if (call.function == "sendIfReceived")
        return send_if_received(c, caller, call.recipient, call.amount);
    return thrown("unknown function " + call.function);
}

const char* to_string(MultisigError e) {
    switch (e) {
    case MultisigError::None: return "ok";
    case MultisigError::BadAmount: return "bad-amount";
    case MultisigError::InsufficientSignatures: return "insufficient-signatures";
    case MultisigError::InsufficientFunds: return "insufficient-funds";
    }
    return "?";
}

MultisigError check_multisig(const MultisigJoint& tx, const std::map<Address, Coins>& balances) {
    if (tx.inputs.empty()) return MultisigError::BadAmount;
    std::map<Address, Coins> needed;
    for (const auto& [owner, amount] : tx.inputs) {
        if (amount <= 0) return MultisigError::BadAmount;
        needed[owner] += amount;
    }
    std::set<Address> eligible;
    for (const auto& [owner, _] : needed) eligible.insert(owner);
    if (!tx.arbiter.empty()) eligible.insert(tx.arbiter);
    std::uint32_t valid = 0;
    for (const auto& s : tx.signatures)
        if (eligible.contains(s)) ++valid;
    if (valid < tx.threshold) return MultisigError::InsufficientSignatures;
    for (const auto& [owner, amount] : needed) {
        auto it = balances.find(owner);
        if (it == balances.end() || it->second < amount) return MultisigError::InsufficientFunds;
    }
    return MultisigError::None;
}

ContractCallResult multisig_joint_payment(std::map<Address, Coins>& balances,
                                          const MultisigJoint& tx) {
    if (auto e = check_multisig(tx, balances); e != MultisigError::None) return thrown(to_string(e));
    ContractCallResult r{true, {}, {}};
    Coins total = 0;
    for (const auto& [owner, amount] : tx.inputs) {
        balances[owner] -= amount;
        total += amount;
        r.state_delta.balance_changes.emplace_back(owner, -amount);
    }
    balances[tx.recipient] += total;
    r.state_delta.balance_changes.emplace_back(tx.recipient, total);
    return r;
}

} // namespace forksim::contracts

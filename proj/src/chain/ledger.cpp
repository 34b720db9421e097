#include <forksim/chain/ledger.hpp>

#include <stdexcept>

namespace forksim {

Coins LedgerState::balance(const Address& a) const {
    auto it = balances.find(a);
    return it == balances.end() ? 0 : it->second;
}

Coins LedgerState::total() const {
    Coins sum = 0;
    for (const auto& [_, v] : balances) sum += v;
    return sum;
}

LedgerState LedgerState::from_genesis(const Allocation& alloc) {
    LedgerState s;
    s.balances = alloc;
    return s;
}

const char* to_string(TxError e) {
    switch (e) {
    case TxError::BadAmount: return "bad-amount";
    case TxError::InsufficientFunds: return "insufficient-funds";
    case TxError::StaleSequence: return "stale-sequence";
    case TxError::UnknownContract: return "unknown-contract";
    case TxError::ContractExists: return "contract-exists";
    case TxError::InsufficientSignatures: return "insufficient-signatures";
    }
    return "?";
}

namespace {

bool seq_ok(const LedgerState& s, const Transaction& tx) {
    auto it = s.last_seq.find(tx.sender);
    return it == s.last_seq.end() || tx.client_seq > it->second;
}

} // namespace

std::optional<TxError> check_tx(const LedgerState& s, const Transaction& tx) {
    if (const auto* t = tx.transfer()) {
        if (t->amount <= 0) return TxError::BadAmount;
        if (s.balance(tx.sender) < t->amount) return TxError::InsufficientFunds;
    } else if (const auto* c = tx.call()) {
        if (c->function == "deploy") {
            if (!c->deploy) return TxError::BadAmount;
            if (s.contracts.contains(c->contract)) return TxError::ContractExists;
            for (const auto& [_, v] : c->deploy->balances)
                if (v < 0) return TxError::BadAmount;
        } else if (!s.contracts.contains(c->contract)) {
            return TxError::UnknownContract;
        }
    } else if (const auto* m = tx.multisig()) {
        switch (contracts::check_multisig(*m, s.balances)) {
        case contracts::MultisigError::None: break;
        case contracts::MultisigError::BadAmount: return TxError::BadAmount;
        case contracts::MultisigError::InsufficientSignatures: return TxError::InsufficientSignatures;
        case contracts::MultisigError::InsufficientFunds: return TxError::InsufficientFunds;
        }
    }
    if (!seq_ok(s, tx)) return TxError::StaleSequence;
    return std::nullopt;
}

TxReceipt apply_tx(LedgerState& s, const Transaction& tx, std::uint64_t height) {
    TxReceipt r;
    r.tx = tx.id;
    r.height = height;
    s.last_seq[tx.sender] = tx.client_seq;
    if (const auto* t = tx.transfer()) {
        r.function = "transfer";
        r.amount = t->amount;
        s.balances[tx.sender] -= t->amount;
        s.balances[t->recipient] += t->amount;
    } else if (const auto* c = tx.call()) {
        r.function = c->function;
        r.contract = c->contract;
        r.amount = c->amount;
        if (c->function == "deploy") {
            s.contracts.emplace(c->contract, contracts::instantiate(c->contract, *c->deploy));
        } else {
            auto& state = s.contracts.at(c->contract);
            auto result = contracts::execute(state, tx.sender, *c);
            r.success = result.success;
            r.effective = !result.state_delta.empty();
            r.reason = result.reason;
        }
    } else if (const auto* m = tx.multisig()) {
        r.function = "multisig";
        auto result = contracts::multisig_joint_payment(s.balances, *m);
        if (!result.success) throw std::logic_error("apply_tx: multisig applied without check");
        for (const auto& [_, v] : m->inputs) r.amount += v;
    }
    return r;
}

std::optional<BlockRejection> apply_block(LedgerState& s, const Block& b, const ChainParams& params,
                                          std::vector<TxReceipt>* receipts) {
    for (const auto& tx : b.txs) {
        if (auto err = check_tx(s, *tx)) return BlockRejection{tx->id, *err};
        auto r = apply_tx(s, *tx, b.height);
        if (receipts) receipts->push_back(std::move(r));
    }
    if (params.block_reward > 0) s.balances[b.miner] += params.block_reward;
    return std::nullopt;
}

LedgerState apply_chain(std::span<const BlockPtr> chain, const ChainParams& params,
                        std::vector<TxReceipt>* receipts) {
    if (chain.empty() || chain.front()->height != 0)
        throw std::logic_error("apply_chain: chain must start at genesis");
    LedgerState s = LedgerState::from_genesis(params.genesis);
    for (std::size_t i = 1; i < chain.size(); ++i) {
        const Block& b = *chain[i];
        if (b.height != i || b.parent_hash != chain[i - 1]->self_hash)
            throw std::logic_error("apply_chain: broken parent link at height " + std::to_string(i));
        if (auto rej = apply_block(s, b, params, receipts))
            throw std::logic_error("apply_chain: invalid tx " + rej->tx + " (" +
                                   to_string(rej->error) + ")");
    }
    return s;
}

} // namespace forksim

#include <forksim/node/tx_pool.hpp>

#include <algorithm>
#include <tuple>

namespace forksim::node {

bool TxPool::add(TxPtr tx) {
    const TxId id = tx->id;
    return by_id_.try_emplace(id, Slot{std::move(tx), next_++}).second;
}

bool TxPool::erase(const TxId& id) { return by_id_.erase(id) > 0; }

std::vector<TxPtr> TxPool::ordered() const {
    std::vector<const Slot*> slots;
    slots.reserve(by_id_.size());
    for (const auto& [_, s] : by_id_) slots.push_back(&s);
    std::sort(slots.begin(), slots.end(), [](const Slot* a, const Slot* b) {
        return std::tie(a->tx->issue_time, a->tx->sender, a->tx->client_seq, a->arrival) <
               std::tie(b->tx->issue_time, b->tx->sender, b->tx->client_seq, b->arrival);
    });
    std::vector<TxPtr> out;
    out.reserve(slots.size());
    for (const auto* s : slots) out.push_back(s->tx);
    return out;
}

} // namespace forksim::node

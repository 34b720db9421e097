#include <forksim/chain/block_tree.hpp>

#include <stdexcept>
#include <unordered_set>

namespace forksim {

const char* to_string(InsertResult r) {
    switch (r) {
    case InsertResult::Inserted: return "inserted";
    case InsertResult::Duplicate: return "duplicate";
    case InsertResult::UnknownParent: return "unknown-parent";
    case InsertResult::BadHeight: return "bad-height";
    case InsertResult::BadHash: return "bad-hash";
    }
    return "?";
}

BlockTree::BlockTree(BlockPtr genesis) {
    if (!genesis || genesis->height != 0 || !genesis->parent_hash.is_zero())
        throw std::invalid_argument("BlockTree: bad genesis");
    genesis_ = genesis->self_hash;
    best_ = genesis_;
    order_.push_back(genesis_);
    nodes_.emplace(genesis_, Entry{std::move(genesis), {}, 0});
}

InsertResult BlockTree::check(const Block& b) const {
    if (nodes_.contains(b.self_hash)) return InsertResult::Duplicate;
    auto p = nodes_.find(b.parent_hash);
    if (p == nodes_.end()) return InsertResult::UnknownParent;
    if (b.height != p->second.block->height + 1) return InsertResult::BadHeight;
    if (digest(b) != b.self_hash) return InsertResult::BadHash;
    return InsertResult::Inserted;
}

InsertResult BlockTree::insert(BlockPtr b) {
    auto r = check(*b);
    if (r != InsertResult::Inserted) return r;
    const Digest d = b->self_hash;
    nodes_.at(b->parent_hash).children.push_back(d);
    const auto h = b->height;
    nodes_.emplace(d, Entry{std::move(b), {}, order_.size()});
    order_.push_back(d);
    if (h > get(best_)->height) best_ = d;
    return r;
}

const BlockPtr& BlockTree::get(const Digest& d) const {
    auto it = nodes_.find(d);
    if (it == nodes_.end()) throw std::out_of_range("BlockTree: unknown digest " + d.short_hex());
    return it->second.block;
}

BlockPtr BlockTree::find(const Digest& d) const {
    auto it = nodes_.find(d);
    return it == nodes_.end() ? nullptr : it->second.block;
}

const std::vector<Digest>& BlockTree::children(const Digest& d) const {
    return nodes_.at(d).children;
}

std::uint64_t BlockTree::arrival(const Digest& d) const { return nodes_.at(d).arrival; }

std::vector<Digest> BlockTree::leaves() const {
    std::vector<Digest> out;
    for (const auto& d : order_)
        if (nodes_.at(d).children.empty()) out.push_back(d);
    return out;
}

std::vector<BlockPtr> BlockTree::path_to(const Digest& tip) const {
    const BlockPtr* cur = &get(tip);
    std::vector<BlockPtr> out((*cur)->height + 1);
    for (;;) {
        out[(*cur)->height] = *cur;
        if ((*cur)->height == 0) break;
        cur = &get((*cur)->parent_hash);
    }
    return out;
}

Digest BlockTree::ancestor_at(const Digest& d, std::uint64_t height) const {
    const Block* cur = get(d).get();
    if (height > cur->height) throw std::out_of_range("ancestor_at: height above block");
    while (cur->height > height) cur = get(cur->parent_hash).get();
    return cur->self_hash;
}

Digest BlockTree::common_ancestor(const Digest& a, const Digest& b) const {
    const Block* x = get(a).get();
    const Block* y = get(b).get();
    while (x->height > y->height) x = get(x->parent_hash).get();
    while (y->height > x->height) y = get(y->parent_hash).get();
    while (x->self_hash != y->self_hash) {
        x = get(x->parent_hash).get();
        y = get(y->parent_hash).get();
    }
    return x->self_hash;
}

CanonicalView view_of(const BlockTree& tree, const Digest& head) {
    CanonicalView v;
    v.head = head;
    auto path = tree.path_to(head);
    v.height = path.back()->height;
    v.chain.reserve(path.size());
    for (const auto& b : path) v.chain.push_back(b->self_hash);
    return v;
}

CanonicalView fork_choice(const BlockTree& tree) {
    Digest best = tree.genesis();
    std::uint64_t best_h = 0;
    std::uint64_t best_arrival = 0;
    for (const auto& leaf : tree.leaves()) {
        const auto h = tree.get(leaf)->height;
        const auto a = tree.arrival(leaf);
        if (h > best_h || (h == best_h && a < best_arrival)) {
            best = leaf;
            best_h = h;
            best_arrival = a;
        }
    }
    return view_of(tree, best);
}

ReorgOutcome reorganize(const BlockTree& tree, const CanonicalView& old_view,
                        const CanonicalView& new_view) {
    ReorgOutcome out;
    if (old_view.head == new_view.head) {
        out.fork_height = old_view.height;
        return out;
    }
    const Digest fork = tree.common_ancestor(old_view.head, new_view.head);
    out.fork_height = tree.get(fork)->height;
    for (auto h = out.fork_height + 1; h <= old_view.height; ++h)
        out.dropped_blocks.push_back(tree.get(old_view.chain[h]));
    std::unordered_set<TxId> in_new;
    for (auto h = out.fork_height + 1; h <= new_view.height; ++h) {
        const auto& b = tree.get(new_view.chain[h]);
        out.added_blocks.push_back(b);
        for (const auto& tx : b->txs) in_new.insert(tx->id);
    }
    for (const auto& b : out.dropped_blocks)
        for (const auto& tx : b->txs)
            if (!in_new.contains(tx->id)) out.returned_txs.push_back(tx);
    return out;
}

} // namespace forksim

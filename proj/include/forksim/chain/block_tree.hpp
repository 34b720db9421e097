#pragma once

#include <forksim/chain/block.hpp>
#include <forksim/chain/types.hpp>

#include <cstdint>
#include <optional>
#include <unordered_map>
#include <vector>

namespace forksim {

enum class InsertResult { Inserted, Duplicate, UnknownParent, BadHeight, BadHash };

const char* to_string(InsertResult r);

/// All blocks a node has ever accepted, rooted at genesis, with the order in
/// which they arrived. Tracks the fork-choice tip incrementally.
class BlockTree {
public:
    explicit BlockTree(BlockPtr genesis);

    /// Structural checks only (parent present, height, hash); ledger validity
    /// is the caller's concern.
    InsertResult check(const Block& b) const;
    InsertResult insert(BlockPtr b);

    bool contains(const Digest& d) const { return nodes_.contains(d); }
    const BlockPtr& get(const Digest& d) const;
    BlockPtr find(const Digest& d) const;
    const std::vector<Digest>& children(const Digest& d) const;
    std::uint64_t arrival(const Digest& d) const;

    const Digest& genesis() const { return genesis_; }
    std::size_t size() const { return nodes_.size(); }

    /// Highest block, earliest arrival among equals.
    const Digest& best_tip() const { return best_; }

    std::vector<Digest> leaves() const;

    /// Blocks from genesis to `tip` inclusive.
    std::vector<BlockPtr> path_to(const Digest& tip) const;

    /// Deepest block that is an ancestor of (or equal to) both.
    Digest common_ancestor(const Digest& a, const Digest& b) const;

    /// Ancestor of `d` at `height` (d itself if equal).
    Digest ancestor_at(const Digest& d, std::uint64_t height) const;

    /// Visits every block in arrival order.
    template <class F> void for_each(F&& f) const {
        for (const auto& d : order_) f(nodes_.at(d).block);
    }

private:
    struct Entry {
        BlockPtr block;
        std::vector<Digest> children;
        std::uint64_t arrival = 0;
    };
    std::unordered_map<Digest, Entry, DigestHash> nodes_;
    std::vector<Digest> order_;
    Digest genesis_;
    Digest best_;
};

/// Canonical chain selected by fork choice.
struct CanonicalView {
    Digest head;
    std::uint64_t height = 0;
    std::vector<Digest> chain; // genesis first

    bool operator==(const CanonicalView&) const = default;
};

/// Longest chain, first-arrived wins ties. Scans all leaves, so it serves as
/// an oracle for BlockTree::best_tip.
CanonicalView fork_choice(const BlockTree& tree);

CanonicalView view_of(const BlockTree& tree, const Digest& head);

struct ReorgOutcome {
    std::uint64_t fork_height = 0; // height of the deepest common ancestor
    std::vector<BlockPtr> dropped_blocks;
    std::vector<BlockPtr> added_blocks;
    std::vector<TxPtr> returned_txs; // in dropped blocks but not in the new branch
};

ReorgOutcome reorganize(const BlockTree& tree, const CanonicalView& old_view,
                        const CanonicalView& new_view);

} // namespace forksim

#include <forksim/chain/validation.hpp>

namespace forksim {

const char* to_string(BlockVerdict v) {
    switch (v) {
    case BlockVerdict::Accept: return "accept";
    case BlockVerdict::Duplicate: return "duplicate";
    case BlockVerdict::UnknownParent: return "unknown-parent";
    case BlockVerdict::BadHeight: return "bad-height";
    case BlockVerdict::BadHash: return "bad-hash";
    case BlockVerdict::InvalidTx: return "invalid-tx";
    }
    return "?";
}

Validation validate_block(const Block& b, const BlockTree& tree, const LedgerState& parent_state,
                          const ChainParams& params) {
    Validation v;
    switch (tree.check(b)) {
    case InsertResult::Inserted: break;
    case InsertResult::Duplicate: v.verdict = BlockVerdict::Duplicate; return v;
    case InsertResult::UnknownParent: v.verdict = BlockVerdict::UnknownParent; return v;
    case InsertResult::BadHeight: v.verdict = BlockVerdict::BadHeight; return v;
    case InsertResult::BadHash: v.verdict = BlockVerdict::BadHash; return v;
    }
    v.state = parent_state;
    if (auto rej = apply_block(v.state, b, params, &v.receipts)) {
        v.verdict = BlockVerdict::InvalidTx;
        v.rejection = rej;
        v.state = {};
        v.receipts.clear();
    }
    return v;
}

Validation validate_block(const Block& b, const BlockTree& tree, const ChainParams& params) {
    if (!tree.contains(b.parent_hash)) {
        Validation v;
        v.verdict = tree.contains(b.self_hash) ? BlockVerdict::Duplicate : BlockVerdict::UnknownParent;
        return v;
    }
    const auto path = tree.path_to(b.parent_hash);
    return validate_block(b, tree, apply_chain(path, params), params);
}

} // namespace forksim

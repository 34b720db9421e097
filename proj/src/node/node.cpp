#include <forksim/chain/validation.hpp>
#include <forksim/contracts/contracts.hpp>
#include <forksim/node/node.hpp>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace forksim::node {

using sim::LogKind;

SimTime sample_mining_time(std::uint64_t difficulty, double hash_power,
                           double seconds_per_difficulty, sim::Rng& rng) {
    if (difficulty == 0 || hash_power <= 0.0)
        throw std::invalid_argument("sample_mining_time: difficulty and hash power must be positive");
    const double mean = seconds_per_difficulty * static_cast<double>(difficulty) / hash_power;
    const auto us = static_cast<std::int64_t>(std::llround(rng.exponential(mean) * 1e6));
    return SimTime::from_micros(std::max<std::int64_t>(us, 1));
}

Node::Node(NodeConfig cfg, std::size_t index, const NodeParams& params, BlockPtr genesis,
           std::uint64_t rng_seed, NodeEnv& env)
    : cfg_(std::move(cfg)), index_(index), params_(params), env_(env), rng_(rng_seed),
      tree_(genesis) {
    const Digest g = genesis->self_hash;
    states_.emplace(g, LedgerState::from_genesis(params_.chain.genesis));
    ledger_ = states_.at(g);
    chain_.push_back(std::move(genesis));
    announced_.insert(g);
    public_tip_ = g;
    private_tip_ = g;
    withhold_until_ = cfg_.withhold_until_height;
}

void Node::log(sim::LogEntry e) {
    e.at = env_.now();
    if (e.node.empty()) e.node = cfg_.id;
    env_.log().append(std::move(e));
}

void Node::start() {
    mining_ = false;
    if (cfg_.mining) set_mining(true);
}

std::optional<std::uint64_t> Node::chain_height_of(const TxId& tx) const {
    auto it = chain_tx_.find(tx);
    if (it == chain_tx_.end()) return std::nullopt;
    return it->second;
}

const LedgerState* Node::state_at(const Digest& d) const {
    auto it = states_.find(d);
    return it == states_.end() ? nullptr : &it->second;
}

Coins Node::max_balance(const Address& a) const {
    Coins best = 0;
    for (const auto& [_, s] : states_) best = std::max(best, s.balance(a));
    return best;
}

bool Node::check_payment(const ContractId& contract, Coins amount) const {
    auto it = ledger_.contracts.find(contract);
    return it != ledger_.contracts.end() && contracts::check_payment(it->second, amount);
}

// ---- mining ---------------------------------------------------------------

const Digest& Node::mining_parent() const {
    return attack_active_ ? private_tip_ : chain_.back()->self_hash;
}

void Node::restart_mining() {
    if (mine_key_) {
        env_.cancel(*mine_key_);
        mine_key_.reset();
    }
    ++token_;
    if (!mining_ || cfg_.hash_power <= 0.0) return;
    const SimTime dt = sample_mining_time(params_.difficulty, cfg_.hash_power,
                                          params_.seconds_per_difficulty, rng_);
    mine_key_ = env_.schedule_mine(env_.now() + dt, sim::MineComplete{index_, token_});
}

void Node::set_mining(bool on) {
    if (on && cfg_.hash_power <= 0.0) return;
    if (on == mining_) return;
    mining_ = on;
    log({.kind = on ? LogKind::MiningStarted : LogKind::MiningStopped, .height = height()});
    restart_mining();
}

bool Node::withholding() const { return withhold_until_.has_value(); }

void Node::set_withhold(std::optional<std::uint64_t> h) {
    withhold_until_ = h;
    if (withhold_until_ && height() >= *withhold_until_) withhold_until_.reset();
    if (!withhold_until_ && !attack_active_) announce(chain_.back()->self_hash);
}

std::unordered_set<TxId> Node::txs_on_path(const Digest& tip) const {
    std::unordered_set<TxId> out;
    const Block* b = tree_.get(tip).get();
    while (b->height > 0) {
        for (const auto& t : b->txs) out.insert(t->id);
        b = tree_.get(b->parent_hash).get();
    }
    return out;
}

void Node::on_mine_complete(std::uint64_t token) {
    if (token != token_ || !mining_) return;
    mine_key_.reset();

    const Digest parent = mining_parent();
    const BlockPtr& parent_block = tree_.get(parent);
    LedgerState working = states_.at(parent);

    Block b;
    b.height = parent_block->height + 1;
    b.parent_hash = parent;
    b.miner = cfg_.id;
    b.difficulty = params_.difficulty;
    b.mined_at = env_.now();
    b.nonce = rng_.next_u64();
    std::unordered_set<TxId> on_branch;
    if (attack_active_) on_branch = txs_on_path(parent);
    for (const auto& tx : pool_.ordered()) {
        if (attack_active_ && (tx->id == cfg_.attack->target_tx || on_branch.contains(tx->id)))
            continue;
        if (auto err = check_tx(working, *tx)) {
            if (rejection_logged_.emplace(tx->id, to_string(*err)).second)
                log({.kind = LogKind::TxRejected, .tx = tx->id, .height = b.height,
                     .detail = to_string(*err)});
            continue;
        }
        apply_tx(working, *tx, b.height);
        b.txs.push_back(tx);
    }
    BlockPtr sealed = seal(std::move(b));
    auto v = validate_block(*sealed, tree_, states_.at(parent), params_.chain);
    if (!v.accepted()) throw std::logic_error("node " + cfg_.id + " mined an invalid block");
    const Digest d = sealed->self_hash;
    tree_.insert(sealed);
    states_.emplace(d, std::move(v.state));
    ++blocks_mined_;
    log({.kind = LogKind::BlockMined, .block = d, .height = sealed->height,
         .value = static_cast<std::int64_t>(sealed->txs.size()),
         .detail = (attack_active_ || withholding()) ? "private" : ""});

    if (attack_active_) private_tip_ = d;
    if (tree_.best_tip() != chain_.back()->self_hash) adopt(tree_.best_tip());

    if (attack_active_) {
        evaluate_attack();
    } else if (withholding()) {
        if (sealed->height >= *withhold_until_) {
            withhold_until_.reset();
            announce(chain_.back()->self_hash);
        }
    } else {
        announce(d);
    }
    restart_mining();
}

// ---- attack ---------------------------------------------------------------

std::optional<std::uint64_t> Node::public_height_of(const TxId& tx) const {
    const Block* b = tree_.get(public_tip_).get();
    while (b->height > 0) {
        for (const auto& t : b->txs)
            if (t->id == tx) return b->height;
        b = tree_.get(b->parent_hash).get();
    }
    return std::nullopt;
}

void Node::evaluate_attack() {
    if (!attack_active_) return;
    const auto priv_h = tree_.get(private_tip_)->height;
    const auto pub_h = tree_.get(public_tip_)->height;
    const auto target_h = public_height_of(cfg_.attack->target_tx);
    if (priv_h > pub_h && target_h && pub_h >= *target_h + params_.k) {
        attack_active_ = false;
        log({.kind = LogKind::AttackReleased, .block = private_tip_, .height = priv_h,
             .value = static_cast<std::int64_t>(pub_h)});
        if (tree_.best_tip() != chain_.back()->self_hash) adopt(tree_.best_tip());
        announce(private_tip_);
        restart_mining();
    } else if (pub_h >= priv_h + cfg_.attack->give_up_lag) {
        attack_active_ = false;
        log({.kind = LogKind::AttackAbandoned, .height = priv_h, .value = static_cast<std::int64_t>(pub_h)});
        restart_mining();
    }
}

// ---- chain updates --------------------------------------------------------

void Node::adopt(const Digest& new_head) {
    const Digest old_head = chain_.back()->self_hash;
    const Digest old_parent = mining_parent();
    const BlockPtr& nb = tree_.get(new_head);
    std::optional<std::uint64_t> fork_height;

    if (nb->parent_hash == old_head) {
        chain_.push_back(nb);
        for (const auto& tx : nb->txs) {
            chain_tx_[tx->id] = nb->height;
            pool_.erase(tx->id);
        }
        ledger_ = states_.at(new_head);
    } else {
        const CanonicalView old_view = view_of(tree_, old_head);
        const CanonicalView new_view = view_of(tree_, new_head);
        const ReorgOutcome r = reorganize(tree_, old_view, new_view);
        fork_height = r.fork_height;
        for (const auto& b : r.dropped_blocks)
            for (const auto& tx : b->txs) chain_tx_.erase(tx->id);
        chain_.resize(r.fork_height + 1);
        for (const auto& b : r.added_blocks) {
            chain_.push_back(b);
            for (const auto& tx : b->txs) {
                chain_tx_[tx->id] = b->height;
                pool_.erase(tx->id);
            }
        }
        std::string returned;
        for (const auto& tx : r.returned_txs) {
            pool_.add(tx);
            returned += (returned.empty() ? "" : ",") + tx->id;
        }
        ledger_ = apply_chain(chain_, params_.chain);
        ++ledger_checks_;
        if (!(ledger_ == states_.at(new_head))) ++ledger_mismatches_;
        std::string detail = "dropped ";
        if (r.dropped_blocks.empty())
            detail += "none";
        else
            detail += std::to_string(r.dropped_blocks.front()->height) + ".." +
                      std::to_string(r.dropped_blocks.back()->height);
        if (!returned.empty()) detail += " returned " + returned;
        log({.kind = LogKind::Reorg, .block = new_head, .height = r.fork_height,
             .value = static_cast<std::int64_t>(r.dropped_blocks.size()), .detail = detail});
    }
    log({.kind = LogKind::HeadChanged, .block = new_head, .height = nb->height});
    update_commits(fork_height);
    if (mining_parent() != old_parent) restart_mining();
    env_.head_changed(*this);
}

void Node::update_commits(std::optional<std::uint64_t> fork_height) {
    std::map<TxId, CommitRecord> dropped;
    if (fork_height) {
        for (auto it = commits_.begin(); it != commits_.end();) {
            if (it->second.block_height > *fork_height) {
                dropped.insert(commits_.extract(it++));
            } else {
                ++it;
            }
        }
        processed_upto_ = std::min(processed_upto_, *fork_height);
    }
    std::vector<CommitRecord> fresh;
    const auto h = height();
    if (h >= params_.k) {
        const auto decided = h - params_.k;
        for (auto i = processed_upto_ + 1; i <= decided; ++i) {
            const auto& b = chain_[i];
            for (const auto& tx : b->txs) {
                CommitRecord rec{tx->id, b->self_hash, b->height, env_.now(), cfg_.id};
                const bool moved = dropped.erase(tx->id) > 0;
                commits_[tx->id] = rec;
                log({.kind = LogKind::Commit, .tx = tx->id, .block = b->self_hash,
                     .height = b->height, .detail = moved ? "moved" : ""});
                fresh.push_back(std::move(rec));
            }
        }
        processed_upto_ = std::max(processed_upto_, decided);
    }
    for (const auto& [tx, rec] : dropped)
        log({.kind = LogKind::Uncommit, .tx = tx, .block = rec.block, .height = rec.block_height});
    for (const auto& rec : fresh) env_.committed(*this, rec);
}

// ---- gossip ---------------------------------------------------------------

void Node::announce(const Digest& tip) {
    std::vector<BlockPtr> seg;
    const Block* b = tree_.get(tip).get();
    while (b->height > 0 && !announced_.contains(b->self_hash)) {
        seg.push_back(tree_.get(b->self_hash));
        b = tree_.get(b->parent_hash).get();
    }
    if (seg.empty()) return;
    std::reverse(seg.begin(), seg.end());
    for (const auto& s : seg) announced_.insert(s->self_hash);
    log({.kind = LogKind::BlockAnnounced, .block = tip, .height = seg.back()->height,
         .value = static_cast<std::int64_t>(seg.size()),
         .detail = std::to_string(seg.front()->height) + ".." + std::to_string(seg.back()->height)});
    gossip(seg, {});
}

void Node::gossip(const std::vector<BlockPtr>& blocks, const NodeId& except) {
    if (blocks.empty()) return;
    auto& net = env_.network();
    for (const auto& peer : net.peers(cfg_.id)) {
        if (peer == except) continue;
        net.send(cfg_.id, peer, sim::Message{sim::NewChainSegment{blocks}});
    }
}

void Node::issue(const TxPtr& tx, bool broadcast) {
    if (cfg_.attack && !attack_used_ && tx->id == cfg_.attack->target_tx) {
        attack_used_ = true;
        attack_active_ = true;
        private_tip_ = chain_.back()->self_hash;
        public_tip_ = private_tip_;
        log({.kind = LogKind::AttackStarted, .tx = tx->id, .block = private_tip_, .height = height()});
    }
    if (!pool_.contains(tx->id) && !chain_tx_.contains(tx->id)) {
        pool_.add(tx);
        env_.tx_received(*this, tx);
    }
    if (broadcast) {
        auto& net = env_.network();
        for (const auto& peer : net.peers(cfg_.id))
            net.send(cfg_.id, peer, sim::Message{sim::NewTx{tx}});
    }
}

void Node::on_message(const NodeId& from, const sim::Message& msg) {
    if (const auto* t = msg.new_tx()) {
        if (pool_.contains(t->tx->id) || chain_tx_.contains(t->tx->id)) return;
        pool_.add(t->tx);
        env_.tx_received(*this, t->tx);
    } else if (const auto* s = msg.segment()) {
        process_segment(from, s->blocks);
    } else if (const auto* r = msg.ancestor_request()) {
        answer_ancestors(from, *r);
    }
}

void Node::answer_ancestors(const NodeId& from, const sim::AncestorRequest& req) {
    if (!tree_.contains(req.tip)) return;
    std::unordered_set<Digest, DigestHash> known(req.locator.begin(), req.locator.end());
    std::vector<BlockPtr> seg;
    const Block* b = tree_.get(req.tip).get();
    while (b->height > 0 && !known.contains(b->self_hash)) {
        seg.push_back(tree_.get(b->self_hash));
        b = tree_.get(b->parent_hash).get();
    }
    std::reverse(seg.begin(), seg.end());
    if (!seg.empty())
        env_.network().send(cfg_.id, from, sim::Message{sim::NewChainSegment{std::move(seg)}});
}

void Node::process_segment(const NodeId& from, const std::vector<BlockPtr>& blocks) {
    for (const auto& b : blocks) {
        const Digest d = b->self_hash;
        if (tree_.contains(d) || rejected_.contains(d)) continue;
        if (rejected_.contains(b->parent_hash)) {
            rejected_.insert(d);
            log({.kind = LogKind::BlockRejected, .peer = from, .block = d, .height = b->height,
                 .detail = "invalid-ancestor"});
            continue;
        }
        if (!tree_.contains(b->parent_hash)) {
            const Digest tip = blocks.back()->self_hash;
            if (ancestor_requests_.emplace(from, tip).second) {
                std::vector<Digest> locator;
                locator.reserve(chain_.size());
                for (const auto& c : chain_) locator.push_back(c->self_hash);
                env_.network().send(cfg_.id, from,
                                    sim::Message{sim::AncestorRequest{tip, std::move(locator)}});
            }
            break;
        }
        auto v = validate_block(*b, tree_, states_.at(b->parent_hash), params_.chain);
        if (!v.accepted()) {
            rejected_.insert(d);
            std::string reason = to_string(v.verdict);
            if (v.rejection) reason += std::string(" ") + v.rejection->tx + " " + to_string(v.rejection->error);
            log({.kind = LogKind::BlockRejected, .peer = from, .block = d, .height = b->height,
                 .detail = reason});
            continue;
        }
        tree_.insert(b);
        states_.emplace(d, std::move(v.state));
        announced_.insert(d);
        if (b->height > tree_.get(public_tip_)->height) public_tip_ = d;
        log({.kind = LogKind::BlockAccepted, .peer = from, .block = d, .height = b->height});
    }

    const Digest old_head = chain_.back()->self_hash;
    if (tree_.best_tip() != old_head) {
        adopt(tree_.best_tip());
        if (!withholding() && !attack_active_) {
            const auto fork = tree_.common_ancestor(old_head, chain_.back()->self_hash);
            const auto fork_h = tree_.get(fork)->height;
            std::vector<BlockPtr> seg(chain_.begin() + static_cast<std::ptrdiff_t>(fork_h + 1),
                                      chain_.end());
            gossip(seg, from);
        }
    }
    evaluate_attack();
}

} // namespace forksim::node

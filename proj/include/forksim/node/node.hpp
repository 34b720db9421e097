#pragma once

#include <forksim/chain/block_tree.hpp>
#include <forksim/chain/ledger.hpp>
#include <forksim/node/tx_pool.hpp>
#include <forksim/sim/event_log.hpp>
#include <forksim/sim/network.hpp>
#include <forksim/sim/rng.hpp>

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace forksim::node {

/// Private-fork attacker: on issuing `target_tx` it mines a branch from its
/// current head that never includes the target, publishes once that branch is
/// longer and the target sits k blocks deep publicly, and gives up when the
/// public chain leads by `give_up_lag` blocks.
struct AttackConfig {
    TxId target_tx;
    std::uint64_t give_up_lag = 4;
    bool operator==(const AttackConfig&) const = default;
};

struct NodeConfig {
    NodeId id;
    double hash_power = 0.0;
    bool mining = false; // mining at start
    std::optional<std::uint64_t> withhold_until_height;
    std::optional<AttackConfig> attack;
    bool operator==(const NodeConfig&) const = default;
};

struct NodeParams {
    std::uint64_t k = 11;
    std::uint64_t difficulty = 0x400;
    double seconds_per_difficulty = 13.5 / 1024.0;
    ChainParams chain;
};

/// Exponential with mean c * d / h, rounded to whole microseconds (at least one).
SimTime sample_mining_time(std::uint64_t difficulty, double hash_power,
                           double seconds_per_difficulty, sim::Rng& rng);

struct CommitRecord {
    TxId tx;
    Digest block;
    std::uint64_t block_height = 0;
    SimTime observed_at;
    NodeId observer;
};

class Node;

/// What a node needs from the surrounding run.
class NodeEnv {
public:
    virtual ~NodeEnv() = default;
    virtual SimTime now() const = 0;
    virtual sim::Network& network() = 0;
    virtual sim::EventLog& log() = 0;
    virtual sim::EventKey schedule_mine(SimTime at, sim::MineComplete ev) = 0;
    virtual void cancel(const sim::EventKey& key) = 0;

    virtual void head_changed(Node&) {}
    virtual void committed(Node&, const CommitRecord&) {}
    virtual void tx_received(Node&, const TxPtr&) {}
};

class Node {
public:
    Node(NodeConfig cfg, std::size_t index, const NodeParams& params, BlockPtr genesis,
         std::uint64_t rng_seed, NodeEnv& env);

    Node(const Node&) = delete;
    Node& operator=(const Node&) = delete;

    const NodeId& id() const { return cfg_.id; }
    const NodeConfig& config() const { return cfg_; }

    /// Schedules the first mining completion if the node starts mining.
    void start();

    void on_message(const NodeId& from, const sim::Message& msg);
    void on_mine_complete(std::uint64_t token);

    /// Adds tx to the local pool and optionally sends it to every peer.
    void issue(const TxPtr& tx, bool broadcast);

    void set_mining(bool on);
    bool mining() const { return mining_; }

    /// Suppresses announcements until the local head reaches `height`; nullopt
    /// releases immediately.
    void set_withhold(std::optional<std::uint64_t> height);

    /// Read-only contract query against this node's current view.
    bool check_payment(const ContractId& contract, Coins amount) const;

    const BlockTree& tree() const { return tree_; }
    const std::vector<BlockPtr>& chain() const { return chain_; }
    const BlockPtr& head() const { return chain_.back(); }
    std::uint64_t height() const { return chain_.back()->height; }
    const LedgerState& ledger() const { return ledger_; }
    const TxPool& pool() const { return pool_; }
    const std::map<TxId, CommitRecord>& commits() const { return commits_; }
    std::optional<std::uint64_t> chain_height_of(const TxId& tx) const;
    const LedgerState* state_at(const Digest& d) const;

    /// Largest balance of `a` in any ledger state this node has computed.
    Coins max_balance(const Address& a) const;

    std::uint64_t blocks_mined() const { return blocks_mined_; }
    std::uint64_t ledger_checks() const { return ledger_checks_; }
    std::uint64_t ledger_mismatches() const { return ledger_mismatches_; }
    bool attacking() const { return attack_active_; }

private:
    const Digest& mining_parent() const;
    void restart_mining();
    void adopt(const Digest& new_head);
    void update_commits(std::optional<std::uint64_t> fork_height);
    void announce(const Digest& tip);
    void gossip(const std::vector<BlockPtr>& blocks, const NodeId& except);
    void process_segment(const NodeId& from, const std::vector<BlockPtr>& blocks);
    void answer_ancestors(const NodeId& from, const sim::AncestorRequest& req);
    bool withholding() const;
    std::unordered_set<TxId> txs_on_path(const Digest& tip) const;
    void evaluate_attack();
    std::optional<std::uint64_t> public_height_of(const TxId& tx) const;
    void log(sim::LogEntry e);

    NodeConfig cfg_;
    std::size_t index_;
    NodeParams params_;
    NodeEnv& env_;
    sim::Rng rng_;

    BlockTree tree_;
    std::unordered_map<Digest, LedgerState, DigestHash> states_;
    std::vector<BlockPtr> chain_;
    std::unordered_map<TxId, std::uint64_t> chain_tx_;
    LedgerState ledger_;
    TxPool pool_;

    std::map<TxId, CommitRecord> commits_;
    std::uint64_t processed_upto_ = 0;

    std::unordered_set<Digest, DigestHash> announced_;
    std::unordered_set<Digest, DigestHash> rejected_;
    std::set<std::pair<NodeId, Digest>> ancestor_requests_;
    std::set<std::pair<TxId, std::string>> rejection_logged_;

    bool mining_ = false;
    std::optional<sim::EventKey> mine_key_;
    std::uint64_t token_ = 0;
    std::optional<std::uint64_t> withhold_until_;

    bool attack_active_ = false;
    bool attack_used_ = false;
    Digest private_tip_;
    Digest public_tip_;

    std::uint64_t blocks_mined_ = 0;
    std::uint64_t ledger_checks_ = 0;
    std::uint64_t ledger_mismatches_ = 0;
};

} // namespace forksim::node

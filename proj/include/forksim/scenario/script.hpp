#pragma once

#include <forksim/chain/transaction.hpp>
#include <forksim/chain/types.hpp>
#include <forksim/node/node.hpp>
#include <forksim/sim/network.hpp>
#include <forksim/sim/sim_time.hpp>

#include <cstdint>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace forksim::scenario {

/// Validation failure; the message starts with the offending path, e.g.
/// "steps[3].action.node: unknown node 'p9'".
class ScenarioError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class TriggerType { AtTime, Height, Committed, Received };

/// When a step fires. Height fires once `node`'s head reaches `height`;
/// Committed once `node` records `tx` as committed; Received once `node`
/// first holds `tx` in its pool.
struct Trigger {
    TriggerType type = TriggerType::AtTime;
    SimTime time;
    NodeId node;
    std::uint64_t height = 0;
    TxId tx;
    bool operator==(const Trigger&) const = default;
};

enum class ActionType {
    IssueTx,
    CallContract,
    DeployContract,
    Partition,
    Heal,
    SetWithhold,
    StopMining,
    StartMining,
    Halt
};

/// Gate for a contract call: issue only if the node's current view answers
/// checkPayment(amount) with true.
struct OffchainCheck {
    ContractId contract;
    Coins amount = 0;
    bool operator==(const OffchainCheck&) const = default;
};

struct Action {
    ActionType type = ActionType::Halt;
    NodeId node;
    TxId tx;
    bool broadcast = true;
    std::optional<OffchainCheck> offchain_check;
    std::vector<std::vector<NodeId>> groups;  // Partition
    std::optional<SimTime> until;             // Partition
    std::vector<sim::LinkId> links;           // Heal; empty heals everything
    std::optional<std::uint64_t> height;      // SetWithhold; nullopt releases
    bool operator==(const Action&) const = default;
};

struct Step {
    Trigger trigger;
    Action action;
    bool operator==(const Step&) const = default;
};

struct LinkSpec {
    NodeId from;
    NodeId to;
    SimTime delay;
    bool operator==(const LinkSpec&) const = default;
};

struct ScenarioScript {
    std::string name;
    std::string description;
    std::uint64_t difficulty = 0x400;
    std::uint64_t k = 11;
    Coins block_reward = 0;
    double seconds_per_difficulty = 13.5 / 1024.0;
    SimTime link_delay = SimTime::from_micros(50'000);
    SimTime max_time = SimTime::from_seconds(86'400);
    NodeId observer; // empty: first non-miner, else first node
    std::vector<node::NodeConfig> nodes;
    std::vector<LinkSpec> links; // empty: full mesh with link_delay
    Allocation genesis;
    std::set<Address> goods_sinks;
    /// Nodes whose commits count as goods redemptions; empty means any node.
    std::set<NodeId> goods_observers;
    std::vector<Transaction> transactions; // issue_time is set when issued
    std::vector<Step> steps;

    bool operator==(const ScenarioScript&) const = default;

    const Transaction* find_tx(const TxId& id) const;
    const node::NodeConfig* find_node(const NodeId& id) const;
    NodeId resolved_observer() const;
    /// Directed links after applying the full-mesh default.
    std::vector<LinkSpec> resolved_links() const;
    /// (first, second) where a Committed(first) trigger issues `second`.
    std::vector<std::pair<TxId, TxId>> conditional_pairs() const;
};

/// Throws ScenarioError on the first problem found.
void validate(const ScenarioScript& s);

const char* to_string(TriggerType t);
const char* to_string(ActionType t);

} // namespace forksim::scenario

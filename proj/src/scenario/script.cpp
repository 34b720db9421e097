#include <forksim/scenario/script.hpp>

#include <map>

namespace forksim::scenario {

const char* to_string(TriggerType t) {
    switch (t) {
    case TriggerType::AtTime: return "at_time";
    case TriggerType::Height: return "height";
    case TriggerType::Committed: return "committed";
    case TriggerType::Received: return "received";
    }
    return "?";
}

const char* to_string(ActionType t) {
    switch (t) {
    case ActionType::IssueTx: return "issue_tx";
    case ActionType::CallContract: return "call_contract";
    case ActionType::DeployContract: return "deploy_contract";
    case ActionType::Partition: return "partition";
    case ActionType::Heal: return "heal";
    case ActionType::SetWithhold: return "set_withhold";
    case ActionType::StopMining: return "stop_mining";
    case ActionType::StartMining: return "start_mining";
    case ActionType::Halt: return "halt";
    }
    return "?";
}

const Transaction* ScenarioScript::find_tx(const TxId& id) const {
    for (const auto& t : transactions)
        if (t.id == id) return &t;
    return nullptr;
}

const node::NodeConfig* ScenarioScript::find_node(const NodeId& id) const {
    for (const auto& n : nodes)
        if (n.id == id) return &n;
    return nullptr;
}

NodeId ScenarioScript::resolved_observer() const {
    if (!observer.empty()) return observer;
    for (const auto& n : nodes)
        if (n.hash_power <= 0.0) return n.id;
    return nodes.empty() ? NodeId{} : nodes.front().id;
}

std::vector<LinkSpec> ScenarioScript::resolved_links() const {
    if (!links.empty()) return links;
    std::vector<LinkSpec> out;
    for (const auto& a : nodes)
        for (const auto& b : nodes)
            if (a.id != b.id) out.push_back({a.id, b.id, link_delay});
    return out;
}

std::vector<std::pair<TxId, TxId>> ScenarioScript::conditional_pairs() const {
    std::vector<std::pair<TxId, TxId>> out;
    for (const auto& s : steps) {
        const bool issues = s.action.type == ActionType::IssueTx ||
                            s.action.type == ActionType::CallContract;
        if (s.trigger.type == TriggerType::Committed && issues) out.emplace_back(s.trigger.tx, s.action.tx);
    }
    return out;
}

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& msg) {
    throw ScenarioError(path + ": " + msg);
}

} // namespace

void validate(const ScenarioScript& s) {
    if (s.name.empty()) fail("name", "must not be empty");
    if (s.difficulty == 0) fail("difficulty", "must be positive");
    if (s.block_reward < 0) fail("block_reward", "must be non-negative");
    if (!(s.seconds_per_difficulty > 0.0)) fail("seconds_per_difficulty", "must be positive");
    if (s.link_delay < SimTime::zero()) fail("link_delay", "must be non-negative");
    if (!(s.max_time > SimTime::zero())) fail("max_time", "must be positive");
    if (s.nodes.empty()) fail("nodes", "at least one node is required");

    std::set<NodeId> ids;
    for (std::size_t i = 0; i < s.nodes.size(); ++i) {
        const auto& n = s.nodes[i];
        const std::string p = "nodes[" + std::to_string(i) + "]";
        if (n.id.empty()) fail(p + ".id", "must not be empty");
        if (!ids.insert(n.id).second) fail(p + ".id", "duplicate node '" + n.id + "'");
        if (!(n.hash_power >= 0.0)) fail(p + ".hash_power", "must be non-negative");
        if (n.mining && n.hash_power <= 0.0) fail(p + ".mining", "a node with zero hash power cannot mine");
        if (n.attack) {
            if (!s.find_tx(n.attack->target_tx))
                fail(p + ".attack.target_tx", "unknown transaction '" + n.attack->target_tx + "'");
            if (n.attack->give_up_lag == 0) fail(p + ".attack.give_up_lag", "must be positive");
        }
    }
    if (!s.observer.empty() && !ids.contains(s.observer))
        fail("observer", "unknown node '" + s.observer + "'");

    std::set<std::pair<NodeId, NodeId>> seen_links;
    for (std::size_t i = 0; i < s.links.size(); ++i) {
        const auto& l = s.links[i];
        const std::string p = "links[" + std::to_string(i) + "]";
        if (!ids.contains(l.from)) fail(p + ".from", "unknown node '" + l.from + "'");
        if (!ids.contains(l.to)) fail(p + ".to", "unknown node '" + l.to + "'");
        if (l.from == l.to) fail(p, "self link");
        if (l.delay < SimTime::zero()) fail(p + ".delay", "must be non-negative");
        if (!seen_links.emplace(l.from, l.to).second) fail(p, "duplicate link " + l.from + "->" + l.to);
    }

    for (const auto& g : s.goods_observers)
        if (!ids.contains(g)) fail("goods_observers", "unknown node '" + g + "'");

    for (const auto& [addr, bal] : s.genesis)
        if (bal < 0) fail("genesis." + addr, "balance must be non-negative");

    std::set<TxId> tx_ids;
    for (std::size_t i = 0; i < s.transactions.size(); ++i) {
        const auto& t = s.transactions[i];
        const std::string p = "transactions[" + std::to_string(i) + "]";
        if (t.id.empty()) fail(p + ".id", "must not be empty");
        if (!tx_ids.insert(t.id).second) fail(p + ".id", "duplicate transaction '" + t.id + "'");
        if (t.sender.empty()) fail(p + ".sender", "must not be empty");
        if (t.client_seq == 0) fail(p + ".seq", "must be positive");
        if (const auto* tr = t.transfer()) {
            if (tr->amount <= 0) fail(p + ".amount", "must be positive");
            if (tr->recipient.empty()) fail(p + ".recipient", "must not be empty");
        } else if (const auto* c = t.call()) {
            if (c->contract.empty()) fail(p + ".contract", "must not be empty");
            if (c->function == "deploy") {
                if (!c->deploy) fail(p, "deploy without a template");
                if (c->deploy->party_a.empty() || c->deploy->party_b.empty())
                    fail(p, "deploy needs party_a and party_b");
                for (const auto& [a, v] : c->deploy->balances)
                    if (v < 0) fail(p + ".balances." + a, "must be non-negative");
            } else if (c->function != "sendTo" && c->function != "sendIfReceived") {
                fail(p + ".function", "unknown function '" + c->function + "'");
            } else if (c->amount < 0) {
                fail(p + ".amount", "must be non-negative");
            }
        } else if (const auto* m = t.multisig()) {
            if (m->inputs.empty()) fail(p + ".inputs", "must not be empty");
            for (std::size_t j = 0; j < m->inputs.size(); ++j)
                if (m->inputs[j].second <= 0)
                    fail(p + ".inputs[" + std::to_string(j) + "].amount", "must be positive");
            if (m->recipient.empty()) fail(p + ".recipient", "must not be empty");
            if (m->threshold == 0) fail(p + ".threshold", "must be positive");
        }
    }
    // per-sender sequence numbers must be distinct
    std::set<std::pair<Address, std::uint64_t>> seqs;
    for (std::size_t i = 0; i < s.transactions.size(); ++i) {
        const auto& t = s.transactions[i];
        if (!seqs.emplace(t.sender, t.client_seq).second)
            fail("transactions[" + std::to_string(i) + "].seq",
                 "sequence " + std::to_string(t.client_seq) + " reused by sender '" + t.sender + "'");
    }

    auto need_node = [&](const std::string& p, const NodeId& n) {
        if (n.empty()) fail(p, "node is required");
        if (!ids.contains(n)) fail(p, "unknown node '" + n + "'");
    };
    auto need_tx = [&](const std::string& p, const TxId& t) -> const Transaction& {
        if (t.empty()) fail(p, "tx is required");
        const auto* tx = s.find_tx(t);
        if (!tx) fail(p, "unknown transaction '" + t + "'");
        return *tx;
    };

    for (std::size_t i = 0; i < s.steps.size(); ++i) {
        const auto& st = s.steps[i];
        const std::string p = "steps[" + std::to_string(i) + "]";
        const auto& tr = st.trigger;
        switch (tr.type) {
        case TriggerType::AtTime:
            if (tr.time < SimTime::zero()) fail(p + ".trigger.time", "must be non-negative");
            break;
        case TriggerType::Height: need_node(p + ".trigger.node", tr.node); break;
        case TriggerType::Committed:
        case TriggerType::Received:
            need_node(p + ".trigger.node", tr.node);
            need_tx(p + ".trigger.tx", tr.tx);
            break;
        }
        const auto& a = st.action;
        const std::string ap = p + ".action";
        switch (a.type) {
        case ActionType::IssueTx: {
            need_node(ap + ".node", a.node);
            const auto& tx = need_tx(ap + ".tx", a.tx);
            if (tx.call()) fail(ap + ".tx", "contract transactions use call_contract or deploy_contract");
            if (a.offchain_check) fail(ap + ".offchain_check", "only valid for call_contract");
            break;
        }
        case ActionType::CallContract: {
            need_node(ap + ".node", a.node);
            const auto& tx = need_tx(ap + ".tx", a.tx);
            if (!tx.call() || tx.call()->function == "deploy")
                fail(ap + ".tx", "'" + a.tx + "' is not a contract call");
            if (a.offchain_check && a.offchain_check->contract.empty())
                fail(ap + ".offchain_check.contract", "must not be empty");
            break;
        }
        case ActionType::DeployContract: {
            need_node(ap + ".node", a.node);
            const auto& tx = need_tx(ap + ".tx", a.tx);
            if (!tx.call() || tx.call()->function != "deploy")
                fail(ap + ".tx", "'" + a.tx + "' is not a deploy transaction");
            break;
        }
        case ActionType::Partition: {
            if (a.groups.empty()) fail(ap + ".groups", "must not be empty");
            std::set<NodeId> in;
            for (std::size_t g = 0; g < a.groups.size(); ++g)
                for (std::size_t m = 0; m < a.groups[g].size(); ++m) {
                    const auto gp = ap + ".groups[" + std::to_string(g) + "][" + std::to_string(m) + "]";
                    need_node(gp, a.groups[g][m]);
                    if (!in.insert(a.groups[g][m]).second) fail(gp, "groups must be disjoint");
                }
            break;
        }
        case ActionType::Heal:
            for (std::size_t l = 0; l < a.links.size(); ++l) {
                const auto lp = ap + ".links[" + std::to_string(l) + "]";
                need_node(lp, a.links[l].first);
                need_node(lp, a.links[l].second);
            }
            break;
        case ActionType::SetWithhold:
        case ActionType::StopMining:
        case ActionType::StartMining: need_node(ap + ".node", a.node); break;
        case ActionType::Halt: break;
        }
        if (a.type == ActionType::StartMining && s.find_node(a.node)->hash_power <= 0.0)
            fail(ap + ".node", "node '" + a.node + "' has no hash power");
    }
}

} // namespace forksim::scenario

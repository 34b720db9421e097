#include <forksim/scenario/runner.hpp>

#include <forksim/node/node.hpp>
#include <forksim/sim/network.hpp>

#include <map>
#include <memory>

namespace forksim::scenario {

using sim::LogKind;

namespace {

class Simulation final : public node::NodeEnv {
public:
    Simulation(const ScenarioScript& s, std::uint64_t seed, const RunOptions& opts)
        : script_(s), seed_(seed), net_(queue_, log_), fired_(s.steps.size(), false) {
        log_.record_messages = opts.record_messages;
        for (const auto& l : s.resolved_links()) net_.add_link(l.from, l.to, l.delay);
        node::NodeParams params;
        params.k = s.k;
        params.difficulty = s.difficulty;
        params.seconds_per_difficulty = s.seconds_per_difficulty;
        params.chain.genesis = s.genesis;
        params.chain.block_reward = s.block_reward;
        const BlockPtr genesis = make_genesis();
        for (std::size_t i = 0; i < s.nodes.size(); ++i) {
            nodes_.push_back(std::make_unique<node::Node>(s.nodes[i], i, params, genesis,
                                                          sim::derive_seed(seed, i), *this));
            index_[s.nodes[i].id] = i;
        }
    }

    // NodeEnv
    SimTime now() const override { return queue_.now(); }
    sim::Network& network() override { return net_; }
    sim::EventLog& log() override { return log_; }
    sim::EventKey schedule_mine(SimTime at, sim::MineComplete ev) override { return queue_.schedule(at, ev); }
    void cancel(const sim::EventKey& key) override { queue_.cancel(key); }

    void head_changed(node::Node& n) override {
        for (std::size_t i = 0; i < script_.steps.size(); ++i) {
            const auto& t = script_.steps[i].trigger;
            if (t.type == TriggerType::Height && t.node == n.id() && n.height() >= t.height) arm(i);
        }
    }

    void committed(node::Node& n, const node::CommitRecord& rec) override {
        redeem_goods(n, rec);
        for (std::size_t i = 0; i < script_.steps.size(); ++i) {
            const auto& t = script_.steps[i].trigger;
            if (t.type == TriggerType::Committed && t.node == n.id() && t.tx == rec.tx) arm(i);
        }
    }

    void tx_received(node::Node& n, const TxPtr& tx) override {
        for (std::size_t i = 0; i < script_.steps.size(); ++i) {
            const auto& t = script_.steps[i].trigger;
            if (t.type == TriggerType::Received && t.node == n.id() && t.tx == tx->id) arm(i);
        }
    }

    RunResult run() {
        for (std::size_t i = 0; i < script_.steps.size(); ++i) {
            const auto& t = script_.steps[i].trigger;
            if (t.type == TriggerType::AtTime) {
                fired_[i] = true;
                queue_.schedule(t.time, sim::ScenarioStep{i});
            } else if (t.type == TriggerType::Height && t.height == 0) {
                arm(i);
            }
        }
        for (auto& n : nodes_) n->start();

        std::string stop = "drained";
        while (!queue_.empty()) {
            if (*queue_.next_time() > script_.max_time) {
                stop = "max_time";
                break;
            }
            auto [key, ev] = queue_.pop();
            dispatch(ev);
            if (halted_) {
                stop = "halt";
                break;
            }
        }
        return finish(stop);
    }

private:
    node::Node& node(const NodeId& id) { return *nodes_.at(index_.at(id)); }

    void arm(std::size_t step) {
        if (fired_[step]) return;
        fired_[step] = true;
        queue_.schedule(queue_.now(), sim::ScenarioStep{step});
    }

    void redeem_goods(node::Node& n, const node::CommitRecord& rec) {
        if (script_.goods_sinks.empty() || redeemed_.contains(rec.tx)) return;
        if (!script_.goods_observers.empty() && !script_.goods_observers.contains(n.id())) return;
        auto it = issued_.find(rec.tx);
        if (it == issued_.end()) return;
        const auto* t = it->second->transfer();
        if (!t || !script_.goods_sinks.contains(t->recipient)) return;
        redeemed_.insert(rec.tx);
        log_.append({.at = now(), .kind = LogKind::GoodsRedeemed, .node = n.id(), .peer = t->recipient,
                     .tx = rec.tx, .block = rec.block, .height = rec.block_height, .value = t->amount,
                     .detail = it->second->sender});
    }

    void dispatch(sim::SimEvent& ev) {
        if (auto* d = std::get_if<sim::Deliver>(&ev)) {
            if (net_.arrive(*d)) node(d->to).on_message(d->from, d->msg);
        } else if (auto* m = std::get_if<sim::MineComplete>(&ev)) {
            nodes_.at(m->node)->on_mine_complete(m->token);
        } else if (auto* s = std::get_if<sim::ScenarioStep>(&ev)) {
            execute(s->step);
        } else if (auto* h = std::get_if<sim::LinkHeal>(&ev)) {
            net_.heal(h->links);
        }
    }

    void issue(const Action& a) {
        const Transaction* tpl = script_.find_tx(a.tx);
        TxPtr tx;
        if (auto it = issued_.find(a.tx); it != issued_.end()) {
            tx = it->second;
        } else {
            auto t = std::make_shared<Transaction>(*tpl);
            t->issue_time = now();
            tx = t;
            issued_.emplace(a.tx, tx);
        }
        log_.append({.at = now(), .kind = LogKind::TxIssued, .node = a.node, .tx = a.tx,
                     .detail = kind_name(*tx) + (a.broadcast ? "" : " local")});
        node(a.node).issue(tx, a.broadcast);
    }

    void execute(std::size_t index) {
        const Action& a = script_.steps[index].action;
        log_.append({.at = now(), .kind = LogKind::StepFired, .node = a.node, .tx = a.tx,
                     .value = static_cast<std::int64_t>(index), .detail = to_string(a.type)});
        switch (a.type) {
        case ActionType::IssueTx:
        case ActionType::DeployContract: issue(a); break;
        case ActionType::CallContract:
            if (a.offchain_check) {
                const bool ok = node(a.node).check_payment(a.offchain_check->contract, a.offchain_check->amount);
                log_.append({.at = now(), .kind = LogKind::OffchainCheck, .node = a.node, .tx = a.tx,
                             .value = ok ? 1 : 0,
                             .detail = a.offchain_check->contract + " paid>" +
                                       std::to_string(a.offchain_check->amount)});
                if (!ok) break;
            }
            issue(a);
            break;
        case ActionType::Partition: net_.partition(a.groups, a.until); break;
        case ActionType::Heal:
            if (a.links.empty())
                net_.heal_all();
            else
                net_.heal(a.links);
            break;
        case ActionType::SetWithhold: node(a.node).set_withhold(a.height); break;
        case ActionType::StopMining: node(a.node).set_mining(false); break;
        case ActionType::StartMining: node(a.node).set_mining(true); break;
        case ActionType::Halt:
            log_.append({.at = now(), .kind = LogKind::Halt});
            halted_ = true;
            break;
        }
    }

    RunResult finish(const std::string& stop) {
        RunResult r;
        auto& t = r.trace;
        t.scenario = script_.name;
        t.seed = seed_;
        t.difficulty = script_.difficulty;
        t.k = script_.k;
        t.observer = script_.resolved_observer();
        t.final_chain = node(t.observer).chain();
        t.converged = true;
        for (const auto& n : nodes_) {
            t.nodes.push_back({n->id(), n->height(), n->head()->self_hash, n->blocks_mined(),
                               n->ledger_checks(), n->ledger_mismatches()});
            if (n->head()->self_hash != t.final_chain.back()->self_hash) t.converged = false;
        }
        t.end_time = now();
        t.stop_reason = stop;
        t.pairs = script_.conditional_pairs();
        t.goods_sinks = script_.goods_sinks;
        t.txs = issued_;
        std::set<Address> addrs;
        for (const auto& [a, _] : script_.genesis) addrs.insert(a);
        for (const auto& tx : script_.transactions) addrs.insert(tx.sender);
        for (const auto& a : addrs) {
            Coins best = 0;
            for (const auto& n : nodes_) best = std::max(best, n->max_balance(a));
            t.max_available[a] = best;
        }
        t.log = log_.entries();
        r.report = metrics::analyze(t);
        r.metrics = metrics::compute_metrics(t, r.report);
        return r;
    }

    const ScenarioScript& script_;
    std::uint64_t seed_;
    sim::Queue queue_;
    sim::EventLog log_;
    sim::Network net_;
    std::vector<std::unique_ptr<node::Node>> nodes_;
    std::map<NodeId, std::size_t> index_;
    std::vector<bool> fired_;
    std::map<TxId, TxPtr> issued_;
    std::set<TxId> redeemed_;
    bool halted_ = false;
};

} // namespace

RunResult run(const ScenarioScript& script, std::uint64_t seed, const RunOptions& opts) {
    validate(script);
    Simulation sim(script, seed, opts);
    return sim.run();
}

} // namespace forksim::scenario

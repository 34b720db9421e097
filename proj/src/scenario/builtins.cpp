#include <forksim/scenario/builtins.hpp>

namespace forksim::scenario {

namespace {

Trigger at_time(double s) { return {.type = TriggerType::AtTime, .time = SimTime::from_seconds(s)}; }
Trigger height(const NodeId& n, std::uint64_t h) { return {.type = TriggerType::Height, .node = n, .height = h}; }
Trigger committed(const NodeId& n, const TxId& tx) { return {.type = TriggerType::Committed, .node = n, .tx = tx}; }
Trigger received(const NodeId& n, const TxId& tx) { return {.type = TriggerType::Received, .node = n, .tx = tx}; }

Action issue(const NodeId& n, const TxId& tx, bool broadcast = true) {
    return {.type = ActionType::IssueTx, .node = n, .tx = tx, .broadcast = broadcast};
}
Action call(const NodeId& n, const TxId& tx, std::optional<OffchainCheck> check = std::nullopt) {
    return {.type = ActionType::CallContract, .node = n, .tx = tx, .offchain_check = std::move(check)};
}
Action deploy(const NodeId& n, const TxId& tx) { return {.type = ActionType::DeployContract, .node = n, .tx = tx}; }
Action start(const NodeId& n) { return {.type = ActionType::StartMining, .node = n}; }
Action stop(const NodeId& n) { return {.type = ActionType::StopMining, .node = n}; }
Action withhold(const NodeId& n, std::uint64_t h) { return {.type = ActionType::SetWithhold, .node = n, .height = h}; }
Action partition(std::vector<std::vector<NodeId>> groups) {
    return {.type = ActionType::Partition, .groups = std::move(groups)};
}
Action heal(std::vector<sim::LinkId> links = {}) { return {.type = ActionType::Heal, .links = std::move(links)}; }
Action halt() { return {.type = ActionType::Halt}; }

Transaction transfer(TxId id, Address from, std::uint64_t seq, Address to, Coins amount) {
    return {.id = std::move(id), .sender = std::move(from), .kind = Transfer{std::move(to), amount}, .client_seq = seq};
}

Transaction contract_call(TxId id, Address from, std::uint64_t seq, ContractId c, std::string fn, Address to,
                          Coins amount) {
    return {.id = std::move(id),
            .sender = std::move(from),
            .kind = ContractCall{std::move(c), std::move(fn), std::move(to), amount, std::nullopt},
            .client_seq = seq};
}

node::NodeConfig miner(NodeId id, double power, bool mining) {
    return {.id = std::move(id), .hash_power = power, .mining = mining};
}

node::NodeConfig client(NodeId id) { return {.id = std::move(id)}; }

/// Shared skeleton of the three-peer executions. `first` is issued at p1 on
/// p1's second block; `second` at p2 once p2 commits `first`.
struct Fig4Shape {
    std::string name;
    std::string description;
    std::vector<Transaction> txs;
    TxId first;
    TxId second;
    bool contract_flow = false;
    std::optional<OffchainCheck> check;
    std::vector<Step> setup;     // before the main script
    std::vector<Step> epilogue;  // after the final heal
};

ScenarioScript fig4_shape(Fig4Shape f) {
    ScenarioScript s;
    s.name = f.name;
    s.description = f.description;
    s.difficulty = 0x400;
    s.k = 11;
    s.max_time = SimTime::from_seconds(7200);
    s.nodes = {miner("p1", 1, true), client("p2"), miner("p3", 24, false)};
    s.genesis = {{"alice", 1000}, {"bob", 1000}, {"carol", 1000}};
    s.transactions = std::move(f.txs);
    auto issue_first = f.contract_flow ? call("p1", f.first) : issue("p1", f.first);
    auto issue_second = f.contract_flow ? call("p2", f.second, f.check) : issue("p2", f.second);
    s.steps = std::move(f.setup);
    const std::vector<Step> main = {
        {height("p1", 1), stop("p1")},
        {height("p3", 1), start("p3")},
        {height("p3", 2), partition({{"p1", "p2"}, {"p3"}})},
        {height("p3", 2), withhold("p3", 45)},
        {height("p3", 32), stop("p3")},
        {height("p3", 32), start("p1")},
        {height("p1", 2), issue_first},
        {committed("p2", f.first), issue_second},
        {height("p1", 15), stop("p1")},
        {height("p2", 15), heal({{"p2", "p3"}})},
        {received("p3", f.second), start("p3")},
        {height("p3", 45), stop("p3")},
        {height("p3", 45), heal()},
    };
    s.steps.insert(s.steps.end(), main.begin(), main.end());
    s.steps.insert(s.steps.end(), f.epilogue.begin(), f.epilogue.end());
    return s;
}

Transaction escrow_deploy(ContractKind kind) {
    ContractTemplate tpl{kind, "alice", "bob", {{"alice", 100}, {"bob", 100}}};
    return {.id = "d1",
            .sender = "alice",
            .kind = ContractCall{"escrow", "deploy", "", 0, tpl},
            .client_seq = 1};
}

} // namespace

ScenarioScript builtin_fig4() {
    return fig4_shape({
        .name = "fig4",
        .description = "Three peers. p3 mines a withheld branch to height 45 while p1 and p2 commit t1 "
                       "behind a partition; p2 then issues t2. The heal reorganises p1 and p2 onto p3's "
                       "branch, which holds t2 but not t1.",
        .txs = {transfer("t1", "alice", 1, "bob", 100), transfer("t2", "bob", 1, "carol", 100)},
        .first = "t1",
        .second = "t2",
    });
}

ScenarioScript builtin_fig4_conflict() {
    return fig4_shape({
        .name = "fig4-conflict",
        .description = "fig4 where t2 spends alice's whole balance. After the reorg p1 resumes mining "
                       "and t1 no longer fits.",
        .txs = {transfer("t1", "alice", 1, "bob", 100), transfer("t2", "alice", 2, "carol", 1000)},
        .first = "t1",
        .second = "t2",
        .epilogue = {{height("p1", 45), start("p1")}, {height("p2", 46), halt()}},
    });
}

ScenarioScript builtin_fig7_onchain() {
    return fig4_shape({
        .name = "fig7-onchain",
        .description = "fig4 flow with an escrow contract. c1 is alice's sendTo(bob, 100); c2 is bob's "
                       "sendIfReceived(carol, 50), which checks the payment inside the contract.",
        .txs = {escrow_deploy(ContractKind::Conditional),
                contract_call("c1", "alice", 2, "escrow", "sendTo", "bob", 100),
                contract_call("c2", "bob", 1, "escrow", "sendIfReceived", "carol", 50)},
        .first = "c1",
        .second = "c2",
        .contract_flow = true,
        .setup = {{at_time(0), deploy("p1", "d1")}},
    });
}

ScenarioScript builtin_fig8_offchain() {
    return fig4_shape({
        .name = "fig8-offchain",
        .description = "fig4 flow with an escrow contract whose payment check is a read-only query. "
                       "p2 calls checkPayment(50) on its own view before sending c2.",
        .txs = {escrow_deploy(ContractKind::OffchainChecked),
                contract_call("c1", "alice", 2, "escrow", "sendTo", "bob", 100),
                contract_call("c2", "bob", 1, "escrow", "sendIfReceived", "carol", 50)},
        .first = "c1",
        .second = "c2",
        .contract_flow = true,
        .check = OffchainCheck{"escrow", 50},
        .setup = {{at_time(0), deploy("p1", "d1")}},
    });
}

ScenarioScript builtin_fig4_racy(std::uint64_t private_blocks) {
    ScenarioScript s;
    s.name = "fig4-racy";
    s.description = "fig4 opening without withholding. p3 mines " + std::to_string(private_blocks) +
                    " blocks behind the partition and then heals; the swap happens only if p2 commits "
                    "t1 before that.";
    s.difficulty = 0x2000;
    s.k = 10;
    s.max_time = SimTime::from_seconds(1e7);
    s.nodes = {miner("p1", 1, true), client("p2"), miner("p3", 24, false)};
    s.genesis = {{"alice", 1000}, {"bob", 1000}, {"carol", 1000}};
    s.transactions = {transfer("t1", "alice", 1, "bob", 100), transfer("t2", "bob", 1, "carol", 100)};
    s.steps = {
        {height("p1", 1), stop("p1")},
        {height("p3", 1), start("p3")},
        {height("p3", 2), partition({{"p1", "p2"}, {"p3"}})},
        {height("p3", 2), start("p1")},
        {height("p1", 2), issue("p1", "t1")},
        {committed("p2", "t1"), issue("p2", "t2")},
        {height("p3", 2 + private_blocks), heal()},
        {committed("p2", "t2"), halt()},
    };
    return s;
}

ScenarioScript builtin_control() {
    ScenarioScript s = builtin_fig4_racy();
    s.name = "control";
    s.description = "fig4-racy without the partition. Link delay stays far below block time.";
    s.difficulty = 0x4000;
    std::erase_if(s.steps, [](const Step& st) {
        return st.action.type == ActionType::Partition || st.action.type == ActionType::Heal;
    });
    return s;
}

ScenarioScript builtin_doublespend(double attacker_power, bool window) {
    ScenarioScript s;
    s.name = "doublespend";
    s.description = window ? "Attacker a pays its whole balance M to the shop through merchant m, mines a "
                             "withheld branch paying the same coins again, and heals after the merchant "
                             "commits the first payment."
                           : "Double-spend attempt without a withholding window.";
    s.difficulty = 0x400;
    s.k = 11;
    s.max_time = SimTime::from_seconds(7200);
    s.nodes = {miner("h", 1, true), client("m"), miner("a", attacker_power, false)};
    s.observer = "m";
    s.genesis = {{"M", 1000}, {"shop", 0}};
    s.goods_sinks = {"shop"};
    s.goods_observers = {"m"};
    s.transactions = {transfer("t1", "M", 1, "shop", 1000), transfer("t2", "M", 2, "shop", 1000)};
    if (window) {
        s.steps = {
            {height("h", 1), stop("h")},
            {height("a", 1), start("a")},
            {height("a", 2), partition({{"a"}, {"h", "m"}})},
            {height("a", 2), withhold("a", 15)},
            {height("a", 2), issue("m", "t1")},
            {height("a", 2), issue("a", "t2", false)},
            {received("h", "t1"), start("h")},
            {height("a", 15), stop("a")},
            {height("h", 13), stop("h")},
            {committed("m", "t1"), heal()},
            {committed("m", "t2"), start("h")},
            {height("m", 16), halt()},
        };
    } else {
        s.name = "doublespend-nowindow";
        s.steps = {
            {height("a", 1), start("a")},
            {height("m", 1), partition({{"a"}, {"h", "m"}})},
            {height("m", 1), issue("m", "t1")},
            {height("m", 1), issue("a", "t2", false)},
            {committed("m", "t1"), heal()},
            {height("m", 30), halt()},
        };
    }
    return s;
}

ScenarioScript builtin_51pct(double attacker_share) {
    ScenarioScript s;
    s.name = "51pct";
    s.description = "Attacker a holds a share of the hash power and forks privately when it pays the "
                    "shop, excluding that payment. No partition.";
    s.difficulty = 0x400;
    s.k = 11;
    s.max_time = SimTime::from_seconds(3600);
    auto a = miner("a", attacker_share, attacker_share > 0.0);
    a.attack = node::AttackConfig{"t1", 4};
    s.nodes = {miner("h", 1.0 - attacker_share, attacker_share < 1.0), client("m"), a};
    s.observer = "m";
    s.genesis = {{"M", 1000}, {"shop", 0}};
    s.goods_sinks = {"shop"};
    s.goods_observers = {"m"};
    s.transactions = {transfer("t1", "M", 1, "shop", 1000), transfer("t2", "M", 2, "shop", 1000)};
    s.steps = {
        {height("m", 3), issue("a", "t1")},
        {height("m", 3), issue("a", "t2", false)},
        {committed("m", "t2"), halt()},
    };
    return s;
}

std::vector<std::string> builtin_names() {
    return {"fig4", "fig4-conflict", "fig4-racy", "control", "doublespend", "51pct", "fig7-onchain",
            "fig8-offchain"};
}

std::optional<ScenarioScript> builtin(const std::string& name) {
    if (name == "fig4") return builtin_fig4();
    if (name == "fig4-conflict") return builtin_fig4_conflict();
    if (name == "fig4-racy") return builtin_fig4_racy();
    if (name == "control") return builtin_control();
    if (name == "doublespend") return builtin_doublespend();
    if (name == "doublespend-nowindow") return builtin_doublespend(0.5, false);
    if (name == "51pct") return builtin_51pct();
    if (name == "fig7-onchain") return builtin_fig7_onchain();
    if (name == "fig8-offchain") return builtin_fig8_offchain();
    return std::nullopt;
}

} // namespace forksim::scenario

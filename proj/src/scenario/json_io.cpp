#include <forksim/scenario/json_io.hpp>

#include <openssl/evp.h>

#include <cmath>
#include <fstream>
#include <sstream>

namespace forksim::scenario {

using ojson = nlohmann::ordered_json;
using json = nlohmann::json;

// ---- writing --------------------------------------------------------------

namespace {

const char* kind_str(ContractKind k) {
    return k == ContractKind::Conditional ? "conditional" : "offchain_checked";
}

ojson tx_json(const Transaction& t) {
    ojson j;
    j["id"] = t.id;
    j["sender"] = t.sender;
    j["seq"] = t.client_seq;
    if (const auto* tr = t.transfer()) {
        j["type"] = "transfer";
        j["recipient"] = tr->recipient;
        j["amount"] = tr->amount;
    } else if (const auto* c = t.call()) {
        if (c->function == "deploy") {
            j["type"] = "deploy";
            j["contract"] = c->contract;
            j["kind"] = kind_str(c->deploy->kind);
            j["party_a"] = c->deploy->party_a;
            j["party_b"] = c->deploy->party_b;
            j["balances"] = c->deploy->balances;
        } else {
            j["type"] = "call";
            j["contract"] = c->contract;
            j["function"] = c->function;
            j["recipient"] = c->recipient;
            j["amount"] = c->amount;
        }
    } else if (const auto* m = t.multisig()) {
        j["type"] = "multisig";
        ojson inputs = ojson::array();
        for (const auto& [owner, amount] : m->inputs) inputs.push_back({{"owner", owner}, {"amount", amount}});
        j["inputs"] = inputs;
        j["recipient"] = m->recipient;
        j["arbiter"] = m->arbiter;
        j["signatures"] = m->signatures;
        j["threshold"] = m->threshold;
    }
    return j;
}

ojson trigger_json(const Trigger& t) {
    ojson j;
    j["type"] = to_string(t.type);
    switch (t.type) {
    case TriggerType::AtTime: j["time"] = t.time.seconds(); break;
    case TriggerType::Height:
        j["node"] = t.node;
        j["height"] = t.height;
        break;
    case TriggerType::Committed:
    case TriggerType::Received:
        j["node"] = t.node;
        j["tx"] = t.tx;
        break;
    }
    return j;
}

ojson action_json(const Action& a) {
    ojson j;
    j["type"] = to_string(a.type);
    switch (a.type) {
    case ActionType::IssueTx:
    case ActionType::CallContract:
    case ActionType::DeployContract:
        j["node"] = a.node;
        j["tx"] = a.tx;
        j["broadcast"] = a.broadcast;
        if (a.offchain_check)
            j["offchain_check"] = {{"contract", a.offchain_check->contract},
                                   {"amount", a.offchain_check->amount}};
        break;
    case ActionType::Partition:
        j["groups"] = a.groups;
        if (a.until) j["until"] = a.until->seconds();
        break;
    case ActionType::Heal:
        if (!a.links.empty()) {
            ojson links = ojson::array();
            for (const auto& [f, t] : a.links) links.push_back({f, t});
            j["links"] = links;
        }
        break;
    case ActionType::SetWithhold:
        j["node"] = a.node;
        j["height"] = a.height ? ojson(*a.height) : ojson(nullptr);
        break;
    case ActionType::StopMining:
    case ActionType::StartMining: j["node"] = a.node; break;
    case ActionType::Halt: break;
    }
    return j;
}

} // namespace

ojson to_json(const ScenarioScript& s) {
    ojson j;
    j["name"] = s.name;
    j["description"] = s.description;
    j["difficulty"] = hex_u64(s.difficulty);
    j["k"] = s.k;
    j["block_reward"] = s.block_reward;
    j["seconds_per_difficulty"] = s.seconds_per_difficulty;
    j["link_delay"] = s.link_delay.seconds();
    j["max_time"] = s.max_time.seconds();
    if (!s.observer.empty()) j["observer"] = s.observer;
    ojson nodes = ojson::array();
    for (const auto& n : s.nodes) {
        ojson nj;
        nj["id"] = n.id;
        nj["hash_power"] = n.hash_power;
        nj["mining"] = n.mining;
        if (n.withhold_until_height) nj["withhold_until_height"] = *n.withhold_until_height;
        if (n.attack) nj["attack"] = {{"target_tx", n.attack->target_tx}, {"give_up_lag", n.attack->give_up_lag}};
        nodes.push_back(nj);
    }
    j["nodes"] = nodes;
    if (!s.links.empty()) {
        ojson links = ojson::array();
        for (const auto& l : s.links) links.push_back({{"from", l.from}, {"to", l.to}, {"delay", l.delay.seconds()}});
        j["links"] = links;
    }
    j["genesis"] = s.genesis;
    j["goods_sinks"] = s.goods_sinks;
    if (!s.goods_observers.empty()) j["goods_observers"] = s.goods_observers;
    ojson txs = ojson::array();
    for (const auto& t : s.transactions) txs.push_back(tx_json(t));
    j["transactions"] = txs;
    ojson steps = ojson::array();
    for (const auto& st : s.steps) steps.push_back({{"trigger", trigger_json(st.trigger)}, {"action", action_json(st.action)}});
    j["steps"] = steps;
    return j;
}

std::string dump(const ScenarioScript& s) { return to_json(s).dump(4) + "\n"; }

std::string script_sha256(const ScenarioScript& s) {
    const std::string text = dump(s);
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    EVP_Digest(text.data(), text.size(), md, &len, EVP_sha256(), nullptr);
    Digest d;
    for (unsigned i = 0; i < 32 && i < len; ++i) d.bytes[i] = md[i];
    return d.hex();
}

// ---- reading --------------------------------------------------------------

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& msg) {
    throw ScenarioError(path + ": " + msg);
}

/// Object reader that tracks its path and rejects unknown keys.
class Obj {
public:
    Obj(const json& j, std::string path) : j_(j), path_(std::move(path)) {
        if (!j_.is_object()) fail(path_, "expected an object");
    }

    std::string at(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }
    bool has(const std::string& key) const {
        used_.insert(key);
        return j_.contains(key) && !j_.at(key).is_null();
    }
    const json& raw(const std::string& key) const {
        used_.insert(key);
        if (!j_.contains(key)) fail(at(key), "missing");
        return j_.at(key);
    }

    std::string str(const std::string& key) const {
        const auto& v = raw(key);
        if (!v.is_string()) fail(at(key), "expected a string");
        return v.get<std::string>();
    }
    std::string str_or(const std::string& key, std::string def) const {
        return has(key) ? str(key) : def;
    }
    std::int64_t integer(const std::string& key) const {
        const auto& v = raw(key);
        if (!v.is_number_integer()) fail(at(key), "expected an integer");
        return v.get<std::int64_t>();
    }
    std::uint64_t uinteger(const std::string& key) const {
        const auto& v = raw(key);
        if (!v.is_number_integer() || (v.is_number_integer() && !v.is_number_unsigned() && v.get<std::int64_t>() < 0))
            fail(at(key), "expected a non-negative integer");
        return v.get<std::uint64_t>();
    }
    double number(const std::string& key) const {
        const auto& v = raw(key);
        if (!v.is_number()) fail(at(key), "expected a number");
        const double d = v.get<double>();
        if (!std::isfinite(d)) fail(at(key), "must be finite");
        return d;
    }
    bool boolean(const std::string& key) const {
        const auto& v = raw(key);
        if (!v.is_boolean()) fail(at(key), "expected true or false");
        return v.get<bool>();
    }
    /// Accepts "0x..." strings or plain integers.
    std::uint64_t u64_hex(const std::string& key) const {
        const auto& v = raw(key);
        if (v.is_string()) {
            auto p = parse_u64(v.get<std::string>());
            if (!p) fail(at(key), "not a number: '" + v.get<std::string>() + "'");
            return *p;
        }
        return uinteger(key);
    }
    SimTime seconds(const std::string& key) const {
        const double d = number(key);
        if (d < 0) fail(at(key), "must be non-negative");
        if (d > 1e12) fail(at(key), "too large");
        return SimTime::from_seconds(d);
    }
    const json& array(const std::string& key) const {
        const auto& v = raw(key);
        if (!v.is_array()) fail(at(key), "expected an array");
        return v;
    }
    std::vector<std::string> strings(const std::string& key) const {
        std::vector<std::string> out;
        const auto& a = array(key);
        for (std::size_t i = 0; i < a.size(); ++i) {
            if (!a[i].is_string()) fail(at(key) + "[" + std::to_string(i) + "]", "expected a string");
            out.push_back(a[i].get<std::string>());
        }
        return out;
    }
    std::map<std::string, Coins> balances(const std::string& key) const {
        const auto& v = raw(key);
        if (!v.is_object()) fail(at(key), "expected an object");
        std::map<std::string, Coins> out;
        for (auto it = v.begin(); it != v.end(); ++it) {
            if (!it.value().is_number_integer()) fail(at(key) + "." + it.key(), "expected an integer");
            out[it.key()] = it.value().get<Coins>();
        }
        return out;
    }

    void finish() const {
        for (auto it = j_.begin(); it != j_.end(); ++it)
            if (!used_.contains(it.key())) fail(at(it.key()), "unknown key");
    }

private:
    const json& j_;
    std::string path_;
    mutable std::set<std::string> used_;
};

std::string idx(const std::string& base, std::size_t i) { return base + "[" + std::to_string(i) + "]"; }

Transaction read_tx(const json& j, const std::string& path) {
    Obj o(j, path);
    Transaction t;
    t.id = o.str("id");
    t.sender = o.str("sender");
    t.client_seq = o.uinteger("seq");
    const std::string type = o.str("type");
    if (type == "transfer") {
        t.kind = Transfer{o.str("recipient"), o.integer("amount")};
    } else if (type == "call") {
        ContractCall c;
        c.contract = o.str("contract");
        c.function = o.str("function");
        if (c.function == "deploy") fail(o.at("function"), "use type \"deploy\" to create contracts");
        c.recipient = o.str("recipient");
        c.amount = o.integer("amount");
        t.kind = c;
    } else if (type == "deploy") {
        ContractCall c;
        c.contract = o.str("contract");
        c.function = "deploy";
        ContractTemplate tpl;
        const std::string kind = o.str_or("kind", "conditional");
        if (kind == "conditional")
            tpl.kind = ContractKind::Conditional;
        else if (kind == "offchain_checked")
            tpl.kind = ContractKind::OffchainChecked;
        else
            fail(o.at("kind"), "expected \"conditional\" or \"offchain_checked\"");
        tpl.party_a = o.str("party_a");
        tpl.party_b = o.str("party_b");
        if (o.has("balances")) tpl.balances = o.balances("balances");
        c.deploy = tpl;
        t.kind = c;
    } else if (type == "multisig") {
        MultisigJoint m;
        const auto& inputs = o.array("inputs");
        for (std::size_t i = 0; i < inputs.size(); ++i) {
            Obj in(inputs[i], idx(o.at("inputs"), i));
            m.inputs.emplace_back(in.str("owner"), in.integer("amount"));
            in.finish();
        }
        m.recipient = o.str("recipient");
        m.arbiter = o.str_or("arbiter", "");
        for (const auto& s : o.strings("signatures")) m.signatures.insert(s);
        if (o.has("threshold")) m.threshold = static_cast<std::uint32_t>(o.uinteger("threshold"));
        t.kind = m;
    } else {
        fail(o.at("type"), "unknown transaction type '" + type + "'");
    }
    o.finish();
    return t;
}

Trigger read_trigger(const json& j, const std::string& path) {
    Obj o(j, path);
    Trigger t;
    const std::string type = o.str("type");
    if (type == "at_time") {
        t.type = TriggerType::AtTime;
        t.time = o.seconds("time");
    } else if (type == "height") {
        t.type = TriggerType::Height;
        t.node = o.str("node");
        t.height = o.uinteger("height");
    } else if (type == "committed" || type == "received") {
        t.type = type == "committed" ? TriggerType::Committed : TriggerType::Received;
        t.node = o.str("node");
        t.tx = o.str("tx");
    } else {
        fail(o.at("type"), "unknown trigger type '" + type + "'");
    }
    o.finish();
    return t;
}

Action read_action(const json& j, const std::string& path) {
    Obj o(j, path);
    Action a;
    const std::string type = o.str("type");
    static const std::map<std::string, ActionType> kTypes = {
        {"issue_tx", ActionType::IssueTx},         {"call_contract", ActionType::CallContract},
        {"deploy_contract", ActionType::DeployContract}, {"partition", ActionType::Partition},
        {"heal", ActionType::Heal},                {"set_withhold", ActionType::SetWithhold},
        {"stop_mining", ActionType::StopMining},   {"start_mining", ActionType::StartMining},
        {"halt", ActionType::Halt},
    };
    auto it = kTypes.find(type);
    if (it == kTypes.end()) fail(o.at("type"), "unknown action type '" + type + "'");
    a.type = it->second;
    switch (a.type) {
    case ActionType::IssueTx:
    case ActionType::CallContract:
    case ActionType::DeployContract:
        a.node = o.str("node");
        a.tx = o.str("tx");
        if (o.has("broadcast")) a.broadcast = o.boolean("broadcast");
        if (o.has("offchain_check")) {
            Obj c(o.raw("offchain_check"), o.at("offchain_check"));
            a.offchain_check = OffchainCheck{c.str("contract"), c.integer("amount")};
            c.finish();
        }
        break;
    case ActionType::Partition: {
        const auto& groups = o.array("groups");
        for (std::size_t g = 0; g < groups.size(); ++g) {
            const auto gp = idx(o.at("groups"), g);
            if (!groups[g].is_array()) fail(gp, "expected an array of node ids");
            std::vector<NodeId> members;
            for (std::size_t m = 0; m < groups[g].size(); ++m) {
                if (!groups[g][m].is_string()) fail(idx(gp, m), "expected a string");
                members.push_back(groups[g][m].get<std::string>());
            }
            a.groups.push_back(std::move(members));
        }
        if (o.has("until")) a.until = o.seconds("until");
        break;
    }
    case ActionType::Heal:
        if (o.has("links")) {
            const auto& links = o.array("links");
            for (std::size_t l = 0; l < links.size(); ++l) {
                const auto lp = idx(o.at("links"), l);
                if (!links[l].is_array() || links[l].size() != 2 || !links[l][0].is_string() ||
                    !links[l][1].is_string())
                    fail(lp, "expected [from, to]");
                a.links.emplace_back(links[l][0].get<std::string>(), links[l][1].get<std::string>());
            }
        }
        break;
    case ActionType::SetWithhold:
        a.node = o.str("node");
        if (o.has("height")) a.height = o.uinteger("height");
        break;
    case ActionType::StopMining:
    case ActionType::StartMining: a.node = o.str("node"); break;
    case ActionType::Halt: break;
    }
    o.finish();
    return a;
}

} // namespace

ScenarioScript from_json(const json& j) {
    Obj o(j, "");
    ScenarioScript s;
    s.name = o.str("name");
    s.description = o.str_or("description", "");
    if (o.has("difficulty")) s.difficulty = o.u64_hex("difficulty");
    if (o.has("k")) s.k = o.uinteger("k");
    if (o.has("block_reward")) s.block_reward = o.integer("block_reward");
    if (o.has("seconds_per_difficulty")) s.seconds_per_difficulty = o.number("seconds_per_difficulty");
    if (o.has("link_delay")) s.link_delay = o.seconds("link_delay");
    if (o.has("max_time")) s.max_time = o.seconds("max_time");
    s.observer = o.str_or("observer", "");

    const auto& nodes = o.array("nodes");
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        Obj n(nodes[i], idx("nodes", i));
        node::NodeConfig c;
        c.id = n.str("id");
        c.hash_power = n.has("hash_power") ? n.number("hash_power") : 0.0;
        c.mining = n.has("mining") ? n.boolean("mining") : c.hash_power > 0.0;
        if (n.has("withhold_until_height")) c.withhold_until_height = n.uinteger("withhold_until_height");
        if (n.has("attack")) {
            Obj a(n.raw("attack"), n.at("attack"));
            node::AttackConfig ac;
            ac.target_tx = a.str("target_tx");
            if (a.has("give_up_lag")) ac.give_up_lag = a.uinteger("give_up_lag");
            a.finish();
            c.attack = ac;
        }
        n.finish();
        s.nodes.push_back(std::move(c));
    }
    if (o.has("links")) {
        const auto& links = o.array("links");
        for (std::size_t i = 0; i < links.size(); ++i) {
            Obj l(links[i], idx("links", i));
            LinkSpec ls{l.str("from"), l.str("to"), s.link_delay};
            if (l.has("delay")) ls.delay = l.seconds("delay");
            l.finish();
            s.links.push_back(std::move(ls));
        }
    }
    if (o.has("genesis")) s.genesis = o.balances("genesis");
    if (o.has("goods_sinks"))
        for (const auto& g : o.strings("goods_sinks")) s.goods_sinks.insert(g);
    if (o.has("goods_observers"))
        for (const auto& g : o.strings("goods_observers")) s.goods_observers.insert(g);
    if (o.has("transactions")) {
        const auto& txs = o.array("transactions");
        for (std::size_t i = 0; i < txs.size(); ++i) s.transactions.push_back(read_tx(txs[i], idx("transactions", i)));
    }
    if (o.has("steps")) {
        const auto& steps = o.array("steps");
        for (std::size_t i = 0; i < steps.size(); ++i) {
            Obj st(steps[i], idx("steps", i));
            Step step;
            step.trigger = read_trigger(st.raw("trigger"), st.at("trigger"));
            step.action = read_action(st.raw("action"), st.at("action"));
            st.finish();
            s.steps.push_back(std::move(step));
        }
    }
    o.finish();
    validate(s);
    return s;
}

ScenarioScript parse(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ScenarioError(std::string("<input>: invalid JSON: ") + e.what());
    }
    return from_json(j);
}

ScenarioScript load_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ScenarioError(path.string() + ": cannot open");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse(ss.str());
}

} // namespace forksim::scenario

#include <forksim/metrics/report.hpp>

#include <cstdio>

namespace forksim::metrics {

using json = nlohmann::ordered_json;
using sim::LogKind;

namespace {

json entry_json(const std::vector<sim::LogEntry>& log, std::size_t i) {
    const auto& e = log[i];
    json j;
    j["index"] = i;
    j["at_s"] = e.at.seconds();
    j["kind"] = sim::to_string(e.kind);
    if (!e.node.empty()) j["node"] = e.node;
    if (!e.peer.empty()) j["peer"] = e.peer;
    if (!e.tx.empty()) j["tx"] = e.tx;
    if (!e.block.is_zero()) j["block"] = e.block.hex();
    if (e.height) j["height"] = *e.height;
    if (e.value) j["value"] = *e.value;
    if (!e.detail.empty()) j["detail"] = e.detail;
    return j;
}

template <class T> json opt(const std::optional<T>& v) { return v ? json(*v) : json(nullptr); }

} // namespace

std::string fixed6(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    return buf;
}

json report_json(const RunTrace& trace, const AnomalyReport& report, const RunMetrics& metrics,
                 const Provenance& prov) {
    json j;
    j["provenance"] = {{"tool", "forksim"},
                       {"format", 1},
                       {"scenario", prov.scenario},
                       {"scenario_sha256", prov.scenario_sha256},
                       {"seed", prov.seed},
                       {"difficulty", hex_u64(prov.difficulty)},
                       {"k", prov.k}};

    json nodes = json::array();
    for (const auto& n : trace.nodes)
        nodes.push_back({{"id", n.id},
                         {"height", n.height},
                         {"head", n.head.hex()},
                         {"blocks_mined", n.blocks_mined},
                         {"ledger_checks", n.ledger_checks},
                         {"ledger_mismatches", n.ledger_mismatches}});
    j["outcome"] = {{"stop_reason", trace.stop_reason},
                    {"end_time_s", trace.end_time.seconds()},
                    {"observer", trace.observer},
                    {"final_height", trace.final_chain.back()->height},
                    {"final_head", trace.final_chain.back()->self_hash.hex()},
                    {"converged", trace.converged},
                    {"nodes", nodes}};

    json chain = json::array();
    for (const auto& b : trace.final_chain) {
        json txs = json::array();
        for (const auto& t : b->txs) txs.push_back(t->id);
        chain.push_back({{"height", b->height},
                         {"hash", b->self_hash.hex()},
                         {"miner", b->miner},
                         {"mined_at_s", b->mined_at.seconds()},
                         {"txs", txs}});
    }
    j["final_chain"] = chain;

    json reorgs = json::array();
    json commit_log = json::array();
    for (std::size_t i = 0; i < trace.log.size(); ++i) {
        const auto k = trace.log[i].kind;
        if (k == LogKind::Reorg) reorgs.push_back(entry_json(trace.log, i));
        if (k == LogKind::Commit || k == LogKind::Uncommit || k == LogKind::GoodsRedeemed)
            commit_log.push_back(entry_json(trace.log, i));
    }
    j["reorgs"] = reorgs;
    j["commit_log"] = commit_log;

    json pairs = json::array();
    json swaps = json::array();
    for (const auto& p : report.pairs) {
        json pj = {{"first", p.first},
                   {"second", p.second},
                   {"swap", p.swap},
                   {"first_final_height", opt(p.first_final_height)},
                   {"second_final_height", opt(p.second_final_height)},
                   {"commit_evidence", p.commit_entry ? entry_json(trace.log, *p.commit_entry) : json(nullptr)},
                   {"issue_evidence", p.issue_entry ? entry_json(trace.log, *p.issue_entry) : json(nullptr)}};
        if (p.swap) swaps.push_back(pj);
        pairs.push_back(std::move(pj));
    }
    json uncommits = json::array();
    for (const auto& u : report.uncommits)
        uncommits.push_back({{"tx", u.tx},
                             {"node", u.node},
                             {"commit_time_s", u.commit_time.seconds()},
                             {"commit_height", u.commit_height},
                             {"final_status", u.final_status},
                             {"evidence", entry_json(trace.log, u.commit_entry)}});
    json ds = json::array();
    for (const auto& d : report.double_spends) {
        json ev = json::array();
        for (auto i : d.redemption_entries) ev.push_back(entry_json(trace.log, i));
        ds.push_back({{"address", d.address},
                      {"redemption_count", d.redemption_count},
                      {"redeemed", d.redeemed},
                      {"max_available", d.max_available},
                      {"evidence", ev}});
    }
    j["anomalies"] = {{"swaps", swaps}, {"pairs", pairs}, {"uncommits", uncommits}, {"double_spends", ds}};

    j["metrics"] = {{"swap", metrics.swap},
                    {"uncommit_count", metrics.uncommit_count},
                    {"t2_final_height", opt(metrics.t2_final_height)},
                    {"termination_time_s", opt(metrics.termination_time_s)},
                    {"dissemination_time_s", opt(metrics.dissemination_time_s)},
                    {"dissemination_withheld", metrics.dissemination_withheld}};
    return j;
}

std::string metrics_csv_header() {
    return "run_id,seed,difficulty,k,swap,uncommit_count,t2_final_height,termination_time_s,"
           "dissemination_time_s";
}

std::string metrics_csv_row(std::size_t run_id, std::uint64_t seed, std::uint64_t difficulty,
                            std::uint64_t k, const RunMetrics& m) {
    std::string s = std::to_string(run_id) + "," + std::to_string(seed) + "," + hex_u64(difficulty) +
                    "," + std::to_string(k) + "," + (m.swap ? "true" : "false") + "," +
                    std::to_string(m.uncommit_count) + ",";
    if (m.t2_final_height) s += std::to_string(*m.t2_final_height);
    s += ",";
    if (m.termination_time_s) s += fixed6(*m.termination_time_s);
    s += ",";
    if (m.dissemination_time_s) s += fixed6(*m.dissemination_time_s);
    return s;
}

} // namespace forksim::metrics

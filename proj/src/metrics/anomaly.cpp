#include <forksim/metrics/anomaly.hpp>

#include <map>
#include <set>

namespace forksim::metrics {

using sim::LogKind;

bool AnomalyReport::any_swap() const {
    for (const auto& p : pairs)
        if (p.swap) return true;
    return false;
}

std::optional<std::uint64_t> height_in(std::span<const BlockPtr> chain, const TxId& tx) {
    for (const auto& b : chain)
        for (const auto& t : b->txs)
            if (t->id == tx) return b->height;
    return std::nullopt;
}

SwapFinding detect_swap(std::span<const sim::LogEntry> log, std::span<const BlockPtr> final_chain,
                        const TxId& t1, const TxId& t2) {
    SwapFinding f;
    f.first = t1;
    f.second = t2;
    for (std::size_t i = 0; i < log.size(); ++i)
        if (log[i].kind == LogKind::TxIssued && log[i].tx == t2) {
            f.issue_entry = i;
            break;
        }
    if (f.issue_entry)
        for (std::size_t i = 0; i < *f.issue_entry; ++i)
            if (log[i].kind == LogKind::Commit && log[i].tx == t1) {
                f.commit_entry = i;
                break;
            }
    f.first_final_height = height_in(final_chain, t1);
    f.second_final_height = height_in(final_chain, t2);
    f.swap = f.commit_entry && f.second_final_height &&
             (!f.first_final_height || *f.first_final_height >= *f.second_final_height);
    return f;
}

std::vector<UncommitFinding> detect_uncommit(std::span<const sim::LogEntry> log,
                                             std::span<const BlockPtr> final_chain) {
    std::set<TxId> in_final;
    for (const auto& b : final_chain)
        for (const auto& t : b->txs) in_final.insert(t->id);
    std::vector<UncommitFinding> out;
    std::set<TxId> seen;
    for (std::size_t i = 0; i < log.size(); ++i) {
        const auto& e = log[i];
        if (e.kind != LogKind::Commit || in_final.contains(e.tx) || !seen.insert(e.tx).second) continue;
        out.push_back({e.tx, e.node, e.at, e.height.value_or(0), i, "absent"});
    }
    return out;
}

std::vector<DoubleSpendFinding> detect_double_spend(const RunTrace& trace) {
    std::map<Address, DoubleSpendFinding> by_addr;
    for (std::size_t i = 0; i < trace.log.size(); ++i) {
        const auto& e = trace.log[i];
        if (e.kind != LogKind::GoodsRedeemed) continue;
        auto it = trace.txs.find(e.tx);
        if (it == trace.txs.end()) continue;
        auto& f = by_addr[it->second->sender];
        f.address = it->second->sender;
        ++f.redemption_count;
        f.redeemed += e.value.value_or(0);
        f.redemption_entries.push_back(i);
    }
    std::vector<DoubleSpendFinding> out;
    for (auto& [addr, f] : by_addr) {
        auto m = trace.max_available.find(addr);
        f.max_available = m == trace.max_available.end() ? 0 : m->second;
        if (f.redeemed > f.max_available) out.push_back(std::move(f));
    }
    return out;
}

AnomalyReport analyze(const RunTrace& trace) {
    AnomalyReport r;
    for (const auto& [a, b] : trace.pairs) r.pairs.push_back(detect_swap(trace.log, trace.final_chain, a, b));
    r.uncommits = detect_uncommit(trace.log, trace.final_chain);
    r.double_spends = detect_double_spend(trace);
    return r;
}

namespace {

std::optional<std::size_t> first_index(std::span<const sim::LogEntry> log, LogKind kind,
                                       const TxId& tx, const NodeId* node = nullptr) {
    for (std::size_t i = 0; i < log.size(); ++i)
        if (log[i].kind == kind && log[i].tx == tx && (!node || log[i].node == *node)) return i;
    return std::nullopt;
}

} // namespace

RunMetrics compute_metrics(const RunTrace& trace, const AnomalyReport& report) {
    RunMetrics m;
    m.uncommit_count = report.uncommits.size();
    if (report.pairs.empty()) return m;
    const auto& p = report.pairs.front();
    m.swap = p.swap;
    m.t2_final_height = p.second_final_height;
    const std::span<const sim::LogEntry> log = trace.log;

    if (p.issue_entry) {
        const NodeId& counterpart = log[*p.issue_entry].node;
        auto issued = first_index(log, LogKind::TxIssued, p.first);
        auto committed = first_index(log, LogKind::Commit, p.first, &counterpart);
        if (issued && committed) m.termination_time_s = (log[*committed].at - log[*issued].at).seconds();
    }

    if (p.second_final_height) {
        const auto& blk = trace.final_chain[*p.second_final_height];
        std::optional<SimTime> start;
        for (const auto& e : log) {
            if (!start && e.kind == LogKind::BlockMined && e.block == blk->self_hash) {
                if (e.detail != "private") {
                    start = e.at;
                    break;
                }
                m.dissemination_withheld = true;
            }
            if (m.dissemination_withheld && e.kind == LogKind::BlockAnnounced && e.node == blk->miner &&
                e.height && *e.height >= blk->height && e.value &&
                static_cast<std::uint64_t>(*e.value) > *e.height - blk->height) {
                start = e.at;
                break;
            }
        }
        std::optional<SimTime> last;
        for (const auto& e : log)
            if (e.kind == LogKind::BlockAccepted && e.block == blk->self_hash) last = e.at;
        if (start) m.dissemination_time_s = ((last && *last > *start) ? *last - *start : SimTime::zero()).seconds();
    }
    return m;
}

std::vector<double> commit_latencies(std::span<const sim::LogEntry> log) {
    std::map<TxId, std::pair<NodeId, SimTime>> issued;
    std::set<TxId> done;
    std::vector<double> out;
    for (const auto& e : log) {
        if (e.kind == LogKind::TxIssued) {
            issued.try_emplace(e.tx, e.node, e.at);
        } else if (e.kind == LogKind::Commit) {
            auto it = issued.find(e.tx);
            if (it == issued.end() || it->second.first != e.node || !done.insert(e.tx).second) continue;
            out.push_back((e.at - it->second.second).seconds());
        }
    }
    return out;
}

} // namespace forksim::metrics

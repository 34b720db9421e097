#include <forksim/sim/network.hpp>

#include <algorithm>
#include <stdexcept>

namespace forksim::sim {

void Network::add_link(const NodeId& from, const NodeId& to, SimTime delay) {
    if (delay < SimTime::zero()) throw std::invalid_argument("negative link delay");
    auto [it, inserted] = links_.try_emplace({from, to});
    it->second.delay = delay;
    if (inserted) peers_[from].push_back(to);
}

bool Network::has_link(const NodeId& from, const NodeId& to) const {
    return links_.contains({from, to});
}

Network::Link& Network::link(const NodeId& from, const NodeId& to) {
    auto it = links_.find({from, to});
    if (it == links_.end()) throw std::logic_error("unknown link " + from + "->" + to);
    return it->second;
}

const Network::Link& Network::link(const NodeId& from, const NodeId& to) const {
    auto it = links_.find({from, to});
    if (it == links_.end()) throw std::logic_error("unknown link " + from + "->" + to);
    return it->second;
}

bool Network::blocked(const NodeId& from, const NodeId& to) const { return link(from, to).blocked; }

SimTime Network::delay(const NodeId& from, const NodeId& to) const { return link(from, to).delay; }

const std::vector<NodeId>& Network::peers(const NodeId& node) const {
    static const std::vector<NodeId> none;
    auto it = peers_.find(node);
    return it == peers_.end() ? none : it->second;
}

void Network::hold(Link& l, const NodeId& from, const NodeId& to, Held h) {
    if (log_.record_messages)
        log_.append({.at = queue_.now(), .kind = LogKind::MessageHeld, .node = from, .peer = to,
                     .detail = h.msg.describe()});
    auto pos = std::upper_bound(l.held.begin(), l.held.end(), h.send_seq,
                                [](std::uint64_t s, const Held& x) { return s < x.send_seq; });
    l.held.insert(pos, std::move(h));
}

void Network::send(const NodeId& from, const NodeId& to, Message msg) {
    Link& l = link(from, to);
    const auto seq = send_seq_++;
    if (l.blocked) {
        hold(l, from, to, Held{seq, std::move(msg)});
        return;
    }
    if (log_.record_messages)
        log_.append({.at = queue_.now(), .kind = LogKind::MessageSent, .node = from, .peer = to,
                     .detail = msg.describe()});
    queue_.schedule(queue_.now() + l.delay, Deliver{std::move(msg), from, to, seq});
}

bool Network::arrive(Deliver& d) {
    Link& l = link(d.from, d.to);
    if (l.blocked) {
        hold(l, d.from, d.to, Held{d.send_seq, std::move(d.msg)});
        return false;
    }
    if (log_.record_messages)
        log_.append({.at = queue_.now(), .kind = LogKind::MessageDelivered, .node = d.to,
                     .peer = d.from, .detail = d.msg.describe()});
    return true;
}

void Network::partition(const std::vector<std::vector<NodeId>>& groups,
                        std::optional<SimTime> until) {
    std::map<NodeId, std::size_t> group_of;
    for (std::size_t g = 0; g < groups.size(); ++g)
        for (const auto& n : groups[g])
            if (!group_of.emplace(n, g).second)
                throw std::invalid_argument("partition groups overlap at " + n);
    std::vector<LinkId> cut;
    for (auto& [id, l] : links_) {
        auto a = group_of.find(id.first);
        auto b = group_of.find(id.second);
        if (a == group_of.end() || b == group_of.end() || a->second == b->second) continue;
        if (!l.blocked) {
            l.blocked = true;
            cut.push_back(id);
        }
    }
    std::string detail;
    for (const auto& g : groups) {
        if (!detail.empty()) detail += " | ";
        for (std::size_t i = 0; i < g.size(); ++i) detail += (i ? "," : "") + g[i];
    }
    log_.append({.at = queue_.now(), .kind = LogKind::Partition,
                 .value = static_cast<std::int64_t>(cut.size()), .detail = detail});
    if (until && !cut.empty()) queue_.schedule(std::max(*until, queue_.now()), LinkHeal{cut});
}

void Network::release(const LinkId& id, Link& l) {
    l.blocked = false;
    const SimTime at = queue_.now() + l.delay;
    while (!l.held.empty()) {
        Held h = std::move(l.held.front());
        l.held.pop_front();
        queue_.schedule(at, Deliver{std::move(h.msg), id.first, id.second, h.send_seq});
    }
}

void Network::heal(const std::vector<LinkId>& links) {
    std::int64_t n = 0;
    std::string detail;
    for (const auto& id : links) {
        Link& l = link(id.first, id.second);
        if (!l.blocked) continue;
        ++n;
        if (!detail.empty()) detail += ' ';
        detail += id.first + "->" + id.second;
        release(id, l);
    }
    log_.append({.at = queue_.now(), .kind = LogKind::Heal, .value = n, .detail = detail});
}

void Network::heal_all() {
    std::vector<LinkId> ids;
    for (const auto& [id, l] : links_)
        if (l.blocked) ids.push_back(id);
    heal(ids);
}

std::size_t Network::held_count() const {
    std::size_t n = 0;
    for (const auto& [_, l] : links_) n += l.held.size();
    return n;
}

} // namespace forksim::sim

#pragma once

#include <forksim/chain/types.hpp>
#include <forksim/sim/event_log.hpp>
#include <forksim/sim/event_queue.hpp>
#include <forksim/sim/message.hpp>
#include <forksim/sim/sim_time.hpp>

#include <cstddef>
#include <cstdint>
#include <deque>
#include <map>
#include <optional>
#include <set>
#include <utility>
#include <variant>
#include <vector>

namespace forksim::sim {

using LinkId = std::pair<NodeId, NodeId>; // (from, to)

struct Deliver {
    Message msg;
    NodeId from;
    NodeId to;
    std::uint64_t send_seq = 0;
};

struct MineComplete {
    std::size_t node = 0;
    std::uint64_t token = 0;
};

struct ScenarioStep {
    std::size_t step = 0;
};

/// Scheduled end of a timed partition.
struct LinkHeal {
    std::vector<LinkId> links;
};

using SimEvent = std::variant<Deliver, MineComplete, ScenarioStep, LinkHeal>;
using Queue = EventQueue<SimEvent>;

/// Directional links with per-link delay. A blocked link holds messages and
/// releases them in send order when healed; nothing is dropped.
class Network {
public:
    Network(Queue& queue, EventLog& log) : queue_(queue), log_(log) {}

    void add_link(const NodeId& from, const NodeId& to, SimTime delay);
    bool has_link(const NodeId& from, const NodeId& to) const;
    bool blocked(const NodeId& from, const NodeId& to) const;
    SimTime delay(const NodeId& from, const NodeId& to) const;

    /// Out-neighbours of `node` in insertion order.
    const std::vector<NodeId>& peers(const NodeId& node) const;

    void send(const NodeId& from, const NodeId& to, Message msg);

    /// Called when a Deliver event fires. Returns false if the link is blocked,
    /// in which case the message goes back to the held queue.
    bool arrive(Deliver& d);

    /// Blocks every link between nodes of different groups. With `until`, a
    /// LinkHeal event is scheduled for that time.
    void partition(const std::vector<std::vector<NodeId>>& groups, std::optional<SimTime> until);

    void heal(const std::vector<LinkId>& links);
    void heal_all();

    std::size_t held_count() const;
    std::uint64_t sent_count() const { return send_seq_; }

private:
    struct Held {
        std::uint64_t send_seq;
        Message msg;
    };
    struct Link {
        SimTime delay;
        bool blocked = false;
        std::deque<Held> held;
    };

    Link& link(const NodeId& from, const NodeId& to);
    const Link& link(const NodeId& from, const NodeId& to) const;
    void hold(Link& l, const NodeId& from, const NodeId& to, Held h);
    void release(const LinkId& id, Link& l);

    Queue& queue_;
    EventLog& log_;
    std::map<LinkId, Link> links_;
    std::map<NodeId, std::vector<NodeId>> peers_;
    std::uint64_t send_seq_ = 0;
};

} // namespace forksim::sim

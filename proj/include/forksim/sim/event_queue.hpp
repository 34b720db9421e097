#pragma once

#include <forksim/sim/sim_time.hpp>

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <utility>

namespace forksim::sim {

struct EventKey {
    SimTime at;
    std::uint64_t seq = 0;
    auto operator<=>(const EventKey&) const = default;
};

/// Pops events in (at, seq) order; seq is a global counter assigned at
/// schedule time, so simultaneous events run in scheduling order.
template <class Payload> class EventQueue {
public:
    SimTime now() const { return now_; }
    bool empty() const { return events_.empty(); }
    std::size_t size() const { return events_.size(); }
    std::uint64_t scheduled() const { return next_seq_; }

    EventKey schedule(SimTime at, Payload p) {
        if (at < now_) throw std::logic_error("EventQueue: scheduling in the past");
        EventKey key{at, next_seq_++};
        events_.emplace(key, std::move(p));
        return key;
    }

    bool cancel(const EventKey& key) { return events_.erase(key) > 0; }

    std::optional<SimTime> next_time() const {
        if (events_.empty()) return std::nullopt;
        return events_.begin()->first.at;
    }

    std::pair<EventKey, Payload> pop() {
        if (events_.empty()) throw std::logic_error("EventQueue: pop on empty queue");
        auto node = events_.extract(events_.begin());
        now_ = node.key().at;
        return {node.key(), std::move(node.mapped())};
    }

private:
    std::map<EventKey, Payload> events_;
    SimTime now_ = SimTime::zero();
    std::uint64_t next_seq_ = 0;
};

} // namespace forksim::sim

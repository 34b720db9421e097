#pragma once

#include <cmath>
#include <compare>
#include <cstdint>
#include <limits>
#include <string>

namespace forksim {

/// Simulated time as integer microseconds. Fixed-point keeps event ordering
/// exact and identical across platforms.
class SimTime {
public:
    constexpr SimTime() = default;

    static constexpr SimTime from_micros(std::int64_t us) { return SimTime(us); }
    static SimTime from_seconds(double s) {
        return SimTime(static_cast<std::int64_t>(std::llround(s * 1e6)));
    }
    static constexpr SimTime zero() { return SimTime(0); }
    static constexpr SimTime infinity() { return SimTime(std::numeric_limits<std::int64_t>::max()); }

    constexpr std::int64_t micros() const { return us_; }
    constexpr double seconds() const { return static_cast<double>(us_) / 1e6; }
    constexpr bool is_infinite() const { return us_ == std::numeric_limits<std::int64_t>::max(); }

    constexpr auto operator<=>(const SimTime&) const = default;

    constexpr SimTime operator+(SimTime o) const {
        if (is_infinite() || o.is_infinite()) return infinity();
        return SimTime(us_ + o.us_);
    }
    constexpr SimTime operator-(SimTime o) const { return SimTime(us_ - o.us_); }

    /// Seconds with six decimals, e.g. "12.500000".
    std::string str() const;

private:
    constexpr explicit SimTime(std::int64_t us) : us_(us) {}
    std::int64_t us_ = 0;
};

} // namespace forksim

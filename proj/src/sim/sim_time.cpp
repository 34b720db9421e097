#include <forksim/sim/sim_time.hpp>

#include <cstdio>

namespace forksim {

std::string SimTime::str() const {
    if (is_infinite()) return "inf";
    const std::int64_t whole = us_ / 1'000'000;
    std::int64_t frac = us_ % 1'000'000;
    const bool neg = us_ < 0;
    if (frac < 0) frac = -frac;
    char buf[48];
    std::snprintf(buf, sizeof buf, "%s%lld.%06lld", (neg && whole == 0) ? "-" : "",
                  static_cast<long long>(whole), static_cast<long long>(frac));
    return buf;
}

} // namespace forksim

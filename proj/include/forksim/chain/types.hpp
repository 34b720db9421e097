#pragma once

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>

namespace forksim {

using Address = std::string;
using NodeId = std::string;
using TxId = std::string;
using ContractId = std::string;
using Coins = std::int64_t;

/// Genesis allocation: starting balance per address.
using Allocation = std::map<Address, Coins>;

/// 256-bit block digest.
struct Digest {
    std::array<std::uint8_t, 32> bytes{};

    static Digest zero() { return {}; }
    bool is_zero() const;
    std::string hex() const;
    /// First 8 hex characters, for logs.
    std::string short_hex() const;
    static Digest from_hex(const std::string& hex);

    auto operator<=>(const Digest&) const = default;
};

struct DigestHash {
    std::size_t operator()(const Digest& d) const noexcept {
        std::size_t h = 0;
        for (int i = 0; i < 8; ++i) h = (h << 8) | d.bytes[static_cast<std::size_t>(i)];
        return h;
    }
};

} // namespace forksim

namespace forksim {

/// "0x" followed by lowercase hex digits.
std::string hex_u64(std::uint64_t v);

/// Parses decimal or 0x-prefixed hex; nullopt on junk or overflow.
std::optional<std::uint64_t> parse_u64(const std::string& s);

} // namespace forksim

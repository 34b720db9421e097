#include <forksim/chain/types.hpp>

#include <charconv>
#include <stdexcept>
#include <string_view>

namespace forksim {

namespace {

constexpr char kHex[] = "0123456789abcdef";

int nibble(char c) {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    return -1;
}

} // namespace

bool Digest::is_zero() const {
    for (auto b : bytes)
        if (b != 0) return false;
    return true;
}

std::string Digest::hex() const {
    std::string s;
    s.reserve(64);
    for (auto b : bytes) {
        s.push_back(kHex[b >> 4]);
        s.push_back(kHex[b & 0xf]);
    }
    return s;
}

std::string Digest::short_hex() const { return hex().substr(0, 8); }

Digest Digest::from_hex(const std::string& hex) {
    if (hex.size() != 64) throw std::invalid_argument("digest hex must be 64 characters");
    Digest d;
    for (std::size_t i = 0; i < 32; ++i) {
        int hi = nibble(hex[2 * i]);
        int lo = nibble(hex[2 * i + 1]);
        if (hi < 0 || lo < 0) throw std::invalid_argument("digest hex has a non-hex character");
        d.bytes[i] = static_cast<std::uint8_t>((hi << 4) | lo);
    }
    return d;
}

} // namespace forksim

namespace forksim {

std::string hex_u64(std::uint64_t v) {
    if (v == 0) return "0x0";
    std::string s;
    while (v) {
        s.insert(s.begin(), kHex[v & 0xf]);
        v >>= 4;
    }
    return "0x" + s;
}

std::optional<std::uint64_t> parse_u64(const std::string& s) {
    std::string_view body = s;
    int base = 10;
    if (body.size() > 2 && body[0] == '0' && (body[1] == 'x' || body[1] == 'X')) {
        body.remove_prefix(2);
        base = 16;
    }
    if (body.empty()) return std::nullopt;
    std::uint64_t v = 0;
    auto [ptr, ec] = std::from_chars(body.data(), body.data() + body.size(), v, base);
    if (ec != std::errc{} || ptr != body.data() + body.size()) return std::nullopt;
    return v;
}

} // namespace forksim

#include <forksim/chain/block.hpp>

#include <openssl/evp.h>

#include <stdexcept>
#include <string_view>

namespace forksim {

namespace {

constexpr std::string_view kDomain = "forksim.block.v1";

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
    for (int s = 24; s >= 0; s -= 8) out.push_back(static_cast<std::uint8_t>(v >> s));
}

void put_u64(std::vector<std::uint8_t>& out, std::uint64_t v) {
    for (int s = 56; s >= 0; s -= 8) out.push_back(static_cast<std::uint8_t>(v >> s));
}

void put_str(std::vector<std::uint8_t>& out, std::string_view s) {
    put_u32(out, static_cast<std::uint32_t>(s.size()));
    out.insert(out.end(), s.begin(), s.end());
}

} // namespace

std::vector<std::uint8_t> serialize_header(const Block& b) {
    std::vector<std::uint8_t> out;
    out.reserve(128 + 16 * b.txs.size());
    put_str(out, kDomain);
    put_u64(out, b.height);
    out.insert(out.end(), b.parent_hash.bytes.begin(), b.parent_hash.bytes.end());
    put_str(out, b.miner);
    put_u32(out, static_cast<std::uint32_t>(b.txs.size()));
    for (const auto& tx : b.txs) put_str(out, tx->id);
    put_u64(out, b.difficulty);
    put_u64(out, static_cast<std::uint64_t>(b.mined_at.micros()));
    put_u64(out, b.nonce);
    return out;
}

Digest digest(const Block& b) {
    const auto bytes = serialize_header(b);
    Digest d;
    unsigned int len = 0;
    if (EVP_Digest(bytes.data(), bytes.size(), d.bytes.data(), &len, EVP_sha256(), nullptr) != 1 ||
        len != d.bytes.size())
        throw std::runtime_error("SHA-256 failed");
    return d;
}

BlockPtr seal(Block b) {
    b.self_hash = digest(b);
    return std::make_shared<const Block>(std::move(b));
}

BlockPtr make_genesis() {
    static const BlockPtr genesis = [] {
        Block g;
        g.height = 0;
        g.miner = "genesis";
        g.difficulty = 1;
        g.mined_at = SimTime::zero();
        g.nonce = 0;
        return seal(std::move(g));
    }();
    return genesis;
}

} // namespace forksim

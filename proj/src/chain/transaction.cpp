#include <forksim/chain/transaction.hpp>

namespace forksim {

std::string kind_name(const Transaction& tx) {
    if (tx.transfer()) return "transfer";
    if (const auto* c = tx.call()) return c->function == "deploy" ? "deploy" : "call";
    return "multisig";
}

} // namespace forksim

#include <forksim/sim/message.hpp>

namespace forksim::sim {

std::string Message::describe() const {
    if (const auto* t = new_tx()) return "tx " + t->tx->id;
    if (const auto* s = segment()) {
        if (s->blocks.empty()) return "segment empty";
        return "segment " + std::to_string(s->blocks.front()->height) + ".." +
               std::to_string(s->blocks.back()->height);
    }
    const auto* r = ancestor_request();
    return "ancestors " + r->tip.short_hex();
}

} // namespace forksim::sim

#include "opq/oracle.hpp"

#include <stdexcept>

namespace opq {

PriorityQueueOracle::PriorityQueueOracle(std::uint64_t capacity)
    : capacity_(capacity) {
    if (capacity == 0) {
        throw std::invalid_argument("queue capacity must be >= 1");
    }
}

SlotOutput PriorityQueueOracle::step(const SlotInput& input) {
    const std::uint64_t q_prev = buffer_.size();
    if (input.arrival) {
        auto [it, inserted] =
            buffer_.emplace(input.arrival->priority, input.arrival->id);
        if (!inserted) {
            throw std::invalid_argument("duplicate packet priority " +
                                        std::to_string(input.arrival->priority));
        }
    }

    SlotOutput out;
    if (input.request && !buffer_.empty()) {
        auto it = std::prev(buffer_.end());
        out.departed = Packet{it->second, it->first};
        buffer_.erase(it);
    } else if (!input.request && input.arrival && q_prev == capacity_) {
        auto it = buffer_.begin();
        out.lost = Packet{it->second, it->first};
        buffer_.erase(it);
    }
    out.occupancy = buffer_.size();
    return out;
}

}  // namespace opq

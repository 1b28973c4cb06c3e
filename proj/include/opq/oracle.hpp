#pragma once

#include <cstdint>
#include <map>

#include "opq/packet.hpp"

namespace opq {

// Reference priority queue. One step per time slot:
//
//   - the arriving packet, if any, joins the pool first;
//   - on a departure request the highest-priority packet of the pool leaves;
//   - with no request, a full buffer and an arrival, the lowest-priority
//     packet of the pool is dropped;
//   - occupancy never exceeds the capacity.
//
// This is the ground truth the switching system is compared against.
class PriorityQueueOracle {
public:
    // capacity must be >= 1.
    explicit PriorityQueueOracle(std::uint64_t capacity);

    // Priorities must be unique among live packets; duplicates throw
    // std::invalid_argument.
    SlotOutput step(const SlotInput& input);

    std::uint64_t capacity() const { return capacity_; }
    std::uint64_t occupancy() const { return buffer_.size(); }

private:
    std::uint64_t capacity_;
    std::map<std::uint64_t, std::uint64_t> buffer_;  // priority -> id
};

}  // namespace opq

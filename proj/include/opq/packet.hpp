#pragma once

#include <cstdint>
#include <optional>

namespace opq {

// A fixed-size optical packet. The id is an opaque identity (the workload
// generator uses the arrival sequence number); the priority is a unique
// 64-bit label, larger value = higher priority.
struct Packet {
    std::uint64_t id = 0;
    std::uint64_t priority = 0;

    friend bool operator==(const Packet&, const Packet&) = default;
};

// External signals of one time slot: the arriving packet a(t), if any, and
// the controller's departure request c(t).
struct SlotInput {
    std::optional<Packet> arrival;
    bool request = false;
};

// Observable outcome of one time slot: the departed packet d(t), the lost
// packet l(t), and the buffer occupancy q(t) at the end of the slot.
struct SlotOutput {
    std::optional<Packet> departed;
    std::optional<Packet> lost;
    std::uint64_t occupancy = 0;
};

}  // namespace opq

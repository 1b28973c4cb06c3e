#pragma once

#include <cstdint>
#include <deque>
#include <optional>
#include <span>
#include <vector>

#include "opq/packet.hpp"

namespace opq {

// Arrival of one packet on one input link of a multiplexer.
struct MuxArrival {
    unsigned input = 0;
    Packet packet;
};

// Behavioral n-to-1 FIFO multiplexer: whenever it holds packets or packets
// arrive, exactly one departs per slot in FIFO order; arrivals that do not
// fit in the buffer are lost.
//
// Packets arriving in the same slot enter the FIFO in ascending input index.
// When the buffer overflows, the newest arrivals (highest input indices) are
// the ones lost.
class FifoMux {
public:
    struct StepResult {
        std::optional<Packet> departed;
        std::vector<Packet> losses;  // newest victim first
    };

    // inputs >= 1, capacity >= 1.
    FifoMux(unsigned inputs, std::uint64_t capacity);

    // One full time slot: arrivals join the FIFO, the head departs if the
    // slot moves any traffic at all, overflow is trimmed. Input indices must
    // be distinct and < inputs().
    StepResult step(std::span<const MuxArrival> arrivals);

    // Split-phase interface for feedback systems where the slot's departure
    // is decided before the slot's arrivals are known: emit() pops the head
    // of the previous slot's buffer, ingest() adds this slot's arrivals and
    // returns the overflow losses. emit()+ingest() equals step() whenever
    // the buffer was nonempty or there are no arrivals.
    std::optional<Packet> emit();
    std::vector<Packet> ingest(std::span<const MuxArrival> arrivals);

    unsigned inputs() const { return inputs_; }
    std::uint64_t capacity() const { return capacity_; }
    std::uint64_t occupancy() const { return buffer_.size(); }

private:
    void push_arrivals(std::span<const MuxArrival> arrivals);
    std::vector<Packet> trim_overflow();

    unsigned inputs_;
    std::uint64_t capacity_;
    std::deque<Packet> buffer_;  // front = oldest
};

}  // namespace opq

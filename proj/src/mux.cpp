#include "opq/mux.hpp"

#include <algorithm>
#include <stdexcept>

namespace opq {

FifoMux::FifoMux(unsigned inputs, std::uint64_t capacity)
    : inputs_(inputs), capacity_(capacity) {
    if (inputs == 0) {
        throw std::invalid_argument("multiplexer needs at least one input");
    }
    if (capacity == 0) {
        throw std::invalid_argument("multiplexer buffer must be >= 1");
    }
}

void FifoMux::push_arrivals(std::span<const MuxArrival> arrivals) {
    if (arrivals.size() > inputs_) {
        throw std::invalid_argument("more arrivals than input links");
    }
    // Same-slot arrivals enter in ascending input index.
    std::vector<MuxArrival> sorted(arrivals.begin(), arrivals.end());
    std::sort(sorted.begin(), sorted.end(),
              [](const MuxArrival& a, const MuxArrival& b) {
                  return a.input < b.input;
              });
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        if (sorted[i].input >= inputs_) {
            throw std::invalid_argument("input index out of range");
        }
        if (i > 0 && sorted[i].input == sorted[i - 1].input) {
            throw std::invalid_argument("duplicate input index");
        }
    }
    for (const MuxArrival& a : sorted) {
        buffer_.push_back(a.packet);
    }
}

std::vector<Packet> FifoMux::trim_overflow() {
    std::vector<Packet> losses;
    while (buffer_.size() > capacity_) {
        losses.push_back(buffer_.back());
        buffer_.pop_back();
    }
    return losses;
}

FifoMux::StepResult FifoMux::step(std::span<const MuxArrival> arrivals) {
    push_arrivals(arrivals);
    StepResult result;
    if (!buffer_.empty()) {
        result.departed = buffer_.front();
        buffer_.pop_front();
    }
    result.losses = trim_overflow();
    return result;
}

std::optional<Packet> FifoMux::emit() {
    if (buffer_.empty()) {
        return std::nullopt;
    }
    Packet head = buffer_.front();
    buffer_.pop_front();
    return head;
}

std::vector<Packet> FifoMux::ingest(std::span<const MuxArrival> arrivals) {
    push_arrivals(arrivals);
    return trim_overflow();
}

}  // namespace opq

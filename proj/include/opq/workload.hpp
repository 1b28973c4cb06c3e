#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "opq/packet.hpp"

namespace opq {

// Exact rational probability, so slot sampling is reproducible bit-for-bit
// across platforms and standard libraries.
struct Probability {
    std::uint64_t num = 0;
    std::uint64_t den = 1;

    bool valid() const { return den != 0 && num <= den; }

    // Accepts "0.35", "1", "0", or "3/7". Throws std::invalid_argument on
    // malformed input or values outside [0,1].
    static Probability parse(std::string_view text);

    friend bool operator==(const Probability&, const Probability&) = default;
};

enum class WorkloadFamily {
    uniform_random,     // independent Bernoulli arrivals and requests
    burst,              // long arrival runs alternating with request runs
    fifo_order,         // priorities strictly decreasing over time
    lifo_order,         // priorities strictly increasing over time
    full_pressure,      // arrival every slot, requests per request_prob
    adversarial_sweep,  // fill / arrival+request hammer / drain cycles
};

inline constexpr WorkloadFamily kAllFamilies[] = {
    WorkloadFamily::uniform_random,   WorkloadFamily::burst,
    WorkloadFamily::fifo_order,       WorkloadFamily::lifo_order,
    WorkloadFamily::full_pressure,    WorkloadFamily::adversarial_sweep,
};

std::string_view workload_family_name(WorkloadFamily family);
WorkloadFamily workload_family_from_name(std::string_view name);

struct WorkloadSpec {
    WorkloadFamily family = WorkloadFamily::uniform_random;
    std::uint64_t slots = 0;
    Probability arrival_prob{1, 2};
    Probability request_prob{1, 2};
    std::uint64_t seed = 0;
};

// Deterministic given the spec. Packet ids are arrival sequence numbers
// starting at 1; priorities are drawn without replacement from the 64-bit
// range (or ordered, for the fifo/lifo families).
std::vector<SlotInput> generate_workload(const WorkloadSpec& spec);

}  // namespace opq

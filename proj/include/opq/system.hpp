#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "opq/mux.hpp"
#include "opq/packet.hpp"
#include "opq/params.hpp"

namespace opq {

// How the per-slot invariant monitors react to a breach.
enum class MonitorMode {
    off,     // no per-slot checking (fast path for long runs)
    record,  // record violations and keep running
    strict,  // throw InvariantViolation on the first breach
};

class InvariantViolation : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

struct Violation {
    std::uint64_t slot = 0;
    std::string invariant;
    std::string detail;
};

// One line of the per-slot trace. Serialized as one JSON object per line,
// schema documented in the README.
struct TraceRecord {
    std::uint64_t t = 0;
    bool arrival = false;
    bool request = false;
    std::uint64_t occupancy = 0;
    std::optional<Packet> departed;
    std::optional<Packet> lost;
    std::vector<std::uint64_t> group_occupancy;  // per group, end of slot
    std::vector<std::uint32_t> group_entrants;   // packets routed per group
    std::vector<std::uint32_t> rr_pointers;      // u_j after the slot
};

std::string to_json_line(const TraceRecord& record);

// Cumulative observations over a run.
struct MonitorStats {
    std::vector<std::uint32_t> max_entrants;       // per group
    std::vector<std::uint64_t> max_occupancy;      // per group
    std::uint64_t patched_routes = 0;              // tag B*+1 routed under a request
    std::uint64_t full_arrival_request_slots = 0;  // slots with q=B*, a=1, c=1
};

// The full switching system: a controller, 2*ell-1 groups of three 4-to-1
// FIFO multiplexers, and the tag-based self-routing policy. One step per
// time slot:
//
//   1. every nonempty multiplexer puts its FIFO head on the switch;
//   2. tags (priority ranks) are computed over all packets in the system
//      plus the arrival;
//   3. on a departure request the best of {arrival, heads of groups 1-2}
//      departs; with a full buffer, no request and an arrival, the worst of
//      {arrival, heads of the last group} is dropped;
//   4. every other packet on the switch is routed to the group whose tag
//      set contains its tag and enters via the group's round-robin links.
//
// A packet whose tag is B*+1 while a departure request is active (full
// buffer, simultaneous arrival and request) is routed to the last group:
// after the simultaneous departure its rank is B*, the last group's tag set.
//
// Instances are single-threaded; distinct instances are independent.
class SwitchSystem {
public:
    explicit SwitchSystem(unsigned ell, MonitorMode mode = MonitorMode::record);

    struct StepResult {
        SlotOutput output;
        TraceRecord trace;
    };

    // Executes one time slot. Throws std::invalid_argument on a duplicate
    // arrival priority and InvariantViolation on unroutable tags, link
    // collisions, or (in strict mode) any monitor breach.
    StepResult step(const SlotInput& input);

    const QueueParams& params() const { return params_; }
    std::uint64_t occupancy() const { return index_.size(); }
    std::uint64_t slot() const { return t_; }
    MonitorMode monitor_mode() const { return mode_; }

    // Rank of every packet in the system plus an optional arrival, by
    // descending priority (tag 1 = highest priority).
    std::vector<std::pair<Packet, std::uint64_t>> compute_tags(
        const std::optional<Packet>& arrival) const;

    const std::vector<Violation>& violations() const { return violations_; }
    const MonitorStats& stats() const { return stats_; }

    // Occupancy of group j's three multiplexers (j 1-based).
    std::array<std::uint64_t, 3> group_occupancy(unsigned j) const;
    // Round-robin pointer u_j (index of the input link lastly used).
    unsigned rr_pointer(unsigned j) const;

private:
    struct IndexEntry {
        std::uint64_t priority = 0;
        std::uint64_t id = 0;
        std::uint64_t tag = 0;       // rank stamped at slot tag_slot
        std::uint64_t tag_slot = 0;
        unsigned group = 0;          // group currently buffering the packet
    };

    struct Group {
        std::vector<FifoMux> muxes;  // three 4-to-1 multiplexers
        unsigned rr = 0;             // u_j
    };

    // Position of the first index entry with priority <= the argument, i.e.
    // the number of strictly higher-priority packets in the system.
    std::size_t index_position(std::uint64_t priority) const;
    bool in_index(std::uint64_t priority) const;
    void erase_from_index(std::uint64_t priority);

    void report(std::uint64_t slot, const char* invariant, std::string detail);
    void sweep_tags(const std::optional<Packet>& arrival);
    void check_end_of_slot(bool patch_fired);

    QueueParams params_;
    MonitorMode mode_;
    std::vector<IndexEntry> index_;  // descending priority
    std::vector<Group> groups_;
    std::uint64_t t_ = 0;
    std::vector<Violation> violations_;
    MonitorStats stats_;
};

}  // namespace opq

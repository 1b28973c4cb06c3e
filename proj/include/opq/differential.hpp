#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "opq/system.hpp"
#include "opq/workload.hpp"

namespace opq {

struct Divergence {
    std::uint64_t slot = 0;
    std::string field;
    std::string system_value;
    std::string oracle_value;
};

// Result of one differential trial: the switching system and the reference
// queue stepped in lockstep on the same inputs.
struct DiffReport {
    std::uint64_t slots_run = 0;
    bool matched = true;
    std::optional<Divergence> first_divergence;
    std::vector<Violation> invariant_violations;
    MonitorStats stats;

    bool clean() const { return matched && invariant_violations.empty(); }

    // Deterministic serialization (field order fixed).
    std::string to_json() const;
};

struct DiffOptions {
    bool stop_at_divergence = false;
    MonitorMode monitors = MonitorMode::record;
    std::function<void(const TraceRecord&)> on_trace;
};

// Steps system and oracle over the generated workload, comparing departure,
// loss and occupancy (packet identities included) at every slot. Divergence
// is data, not an error.
DiffReport run_differential(unsigned ell, const WorkloadSpec& spec,
                            const DiffOptions& options = {});

// A fleet of independent trials: every family x trials seeds for each ell in
// [ell_lo, ell_hi]. Trials run concurrently; results come back in the fixed
// (ell, family, trial) order regardless of scheduling.
struct FleetSpec {
    unsigned ell_lo = 1;
    unsigned ell_hi = 6;
    unsigned trials = 100;
    std::uint64_t slots = 2000;
    std::uint64_t base_seed = 1;
    unsigned jobs = 0;  // 0 = hardware concurrency
};

struct TrialResult {
    unsigned ell = 0;
    WorkloadFamily family = WorkloadFamily::uniform_random;
    std::uint64_t seed = 0;
    DiffReport report;
};

// Per-family workload defaults used by fleet runs (full pressure gets rare
// requests, the others even arrival/request odds).
WorkloadSpec fleet_workload(WorkloadFamily family, std::uint64_t slots,
                            std::uint64_t seed);

std::vector<TrialResult> run_fleet(const FleetSpec& spec);

}  // namespace opq

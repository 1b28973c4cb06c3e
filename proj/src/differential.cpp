#include "opq/differential.hpp"

#include <atomic>
#include <thread>

#include <json.hpp>

#include "opq/oracle.hpp"

namespace opq {

namespace {

std::string packet_string(const std::optional<Packet>& p) {
    if (!p) {
        return "none";
    }
    return "id=" + std::to_string(p->id) +
           ",prio=" + std::to_string(p->priority);
}

}  // namespace

DiffReport run_differential(unsigned ell, const WorkloadSpec& spec,
                            const DiffOptions& options) {
    const std::vector<SlotInput> inputs = generate_workload(spec);
    SwitchSystem system(ell, options.monitors);
    PriorityQueueOracle oracle(system.params().b_star());

    DiffReport report;
    for (const SlotInput& input : inputs) {
        const SwitchSystem::StepResult sys = system.step(input);
        const SlotOutput orc = oracle.step(input);
        ++report.slots_run;
        if (options.on_trace) {
            options.on_trace(sys.trace);
        }
        if (report.matched) {
            auto diverge = [&](const char* field, std::string sys_value,
                              std::string orc_value) {
                report.matched = false;
                report.first_divergence =
                    Divergence{report.slots_run, field, std::move(sys_value),
                               std::move(orc_value)};
            };
            if (sys.output.departed != orc.departed) {
                diverge("departed", packet_string(sys.output.departed),
                        packet_string(orc.departed));
            } else if (sys.output.lost != orc.lost) {
                diverge("lost", packet_string(sys.output.lost),
                        packet_string(orc.lost));
            } else if (sys.output.occupancy != orc.occupancy) {
                diverge("occupancy", std::to_string(sys.output.occupancy),
                        std::to_string(orc.occupancy));
            }
            if (!report.matched && options.stop_at_divergence) {
                break;
            }
        }
    }
    report.invariant_violations = system.violations();
    report.stats = system.stats();
    return report;
}

std::string DiffReport::to_json() const {
    nlohmann::ordered_json j;
    j["slots_run"] = slots_run;
    j["matched"] = matched;
    if (first_divergence) {
        nlohmann::ordered_json d;
        d["slot"] = first_divergence->slot;
        d["field"] = first_divergence->field;
        d["system"] = first_divergence->system_value;
        d["oracle"] = first_divergence->oracle_value;
        j["first_divergence"] = d;
    } else {
        j["first_divergence"] = nullptr;
    }
    nlohmann::ordered_json violations = nlohmann::ordered_json::array();
    for (const Violation& v : invariant_violations) {
        nlohmann::ordered_json item;
        item["slot"] = v.slot;
        item["invariant"] = v.invariant;
        item["detail"] = v.detail;
        violations.push_back(item);
    }
    j["invariant_violations"] = violations;
    j["max_entrants_per_group"] = stats.max_entrants;
    j["max_group_occupancy"] = stats.max_occupancy;
    j["patched_routes"] = stats.patched_routes;
    j["full_arrival_request_slots"] = stats.full_arrival_request_slots;
    return j.dump();
}

WorkloadSpec fleet_workload(WorkloadFamily family, std::uint64_t slots,
                            std::uint64_t seed) {
    WorkloadSpec spec;
    spec.family = family;
    spec.slots = slots;
    spec.seed = seed;
    if (family == WorkloadFamily::full_pressure) {
        spec.arrival_prob = Probability{1, 1};
        spec.request_prob = Probability{1, 16};
    } else {
        spec.arrival_prob = Probability{1, 2};
        spec.request_prob = Probability{1, 2};
    }
    return spec;
}

std::vector<TrialResult> run_fleet(const FleetSpec& fleet) {
    if (fleet.ell_lo == 0 || fleet.ell_lo > fleet.ell_hi) {
        throw std::invalid_argument("bad ell range");
    }
    if (fleet.trials == 0) {
        throw std::invalid_argument("fleet needs at least one trial");
    }

    struct Task {
        unsigned ell;
        WorkloadFamily family;
        std::uint64_t seed;
    };
    std::vector<Task> tasks;
    for (unsigned ell = fleet.ell_lo; ell <= fleet.ell_hi; ++ell) {
        for (WorkloadFamily family : kAllFamilies) {
            for (unsigned trial = 0; trial < fleet.trials; ++trial) {
                tasks.push_back({ell, family, fleet.base_seed + trial});
            }
        }
    }

    std::vector<TrialResult> results(tasks.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= tasks.size()) {
                return;
            }
            const Task& task = tasks[i];
            TrialResult& r = results[i];
            r.ell = task.ell;
            r.family = task.family;
            r.seed = task.seed;
            r.report = run_differential(
                task.ell, fleet_workload(task.family, fleet.slots, task.seed));
        }
    };

    unsigned jobs = fleet.jobs ? fleet.jobs : std::thread::hardware_concurrency();
    jobs = std::max(1u, std::min<unsigned>(jobs, tasks.size()));
    std::vector<std::thread> pool;
    pool.reserve(jobs);
    for (unsigned i = 0; i < jobs; ++i) {
        pool.emplace_back(worker);
    }
    for (std::thread& t : pool) {
        t.join();
    }
    return results;
}

}  // namespace opq

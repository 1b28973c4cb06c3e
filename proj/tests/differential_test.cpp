#include <doctest.h>

#include <cstdint>
#include <vector>

#include "opq/differential.hpp"

using opq::DiffOptions;
using opq::DiffReport;
using opq::WorkloadFamily;
using opq::WorkloadSpec;

namespace {

WorkloadSpec uniform_spec(std::uint64_t slots, std::uint64_t seed) {
    WorkloadSpec spec;
    spec.family = WorkloadFamily::uniform_random;
    spec.slots = slots;
    spec.arrival_prob = {1, 2};
    spec.request_prob = {1, 2};
    spec.seed = seed;
    return spec;
}

}  // namespace

TEST_CASE("the construction emulates the queue on random traffic") {
    const DiffReport report = opq::run_differential(5, uniform_spec(2000, 7));
    CHECK(report.slots_run == 2000);
    CHECK(report.matched);
    CHECK(!report.first_divergence.has_value());
    CHECK(report.invariant_violations.empty());
}

TEST_CASE("the single-group construction is trivially exact") {
    for (WorkloadFamily family : opq::kAllFamilies) {
        const DiffReport report =
            opq::run_differential(1, opq::fleet_workload(family, 500, 11));
        CHECK(report.clean());
    }
}

TEST_CASE("adversarial sweeps reach the full-buffer request edge") {
    const DiffReport report = opq::run_differential(
        3, opq::fleet_workload(WorkloadFamily::adversarial_sweep, 2000, 13));
    CHECK(report.clean());
    CHECK(report.stats.full_arrival_request_slots >= 1);
    CHECK(report.stats.patched_routes >= 1);
    CHECK(report.stats.patched_routes == report.stats.full_arrival_request_slots);
}

TEST_CASE("full pressure produces losses that match the oracle") {
    WorkloadSpec spec = opq::fleet_workload(WorkloadFamily::full_pressure, 6, 17);
    spec.request_prob = {0, 1};
    DiffOptions options;
    std::uint64_t losses = 0;
    options.on_trace = [&losses](const opq::TraceRecord& record) {
        if (record.lost) {
            ++losses;
        }
    };
    const DiffReport report = opq::run_differential(2, spec, options);
    CHECK(report.clean());
    CHECK(losses >= 1);
}

TEST_CASE("reports serialize deterministically") {
    const DiffReport a = opq::run_differential(4, uniform_spec(1500, 23));
    const DiffReport b = opq::run_differential(4, uniform_spec(1500, 23));
    CHECK(a.to_json() == b.to_json());
    CHECK(a.clean());
}

TEST_CASE("every family matches across a small sweep") {
    for (unsigned ell : {2u, 4u}) {
        for (WorkloadFamily family : opq::kAllFamilies) {
            for (std::uint64_t seed : {1ull, 2ull, 3ull}) {
                CAPTURE(ell);
                CAPTURE(seed);
                const DiffReport report = opq::run_differential(
                    ell, opq::fleet_workload(family, 1000, seed));
                REQUIRE(report.matched);
                REQUIRE(report.invariant_violations.empty());
            }
        }
    }
}

TEST_CASE("fleet results come back in deterministic order") {
    opq::FleetSpec fleet;
    fleet.ell_lo = 1;
    fleet.ell_hi = 2;
    fleet.trials = 2;
    fleet.slots = 200;
    fleet.base_seed = 5;
    fleet.jobs = 2;
    const auto results = opq::run_fleet(fleet);
    REQUIRE(results.size() == 2 * 6 * 2);
    CHECK(results.front().ell == 1);
    CHECK(results.front().family == WorkloadFamily::uniform_random);
    CHECK(results.front().seed == 5);
    CHECK(results.back().ell == 2);
    CHECK(results.back().family == WorkloadFamily::adversarial_sweep);
    CHECK(results.back().seed == 6);
    for (const auto& r : results) {
        CHECK(r.report.clean());
    }
}

TEST_CASE("observed entrants never exceed the collision bound") {
    const DiffReport report = opq::run_differential(
        5, opq::fleet_workload(WorkloadFamily::burst, 4000, 31));
    CHECK(report.clean());
    for (std::uint32_t m : report.stats.max_entrants) {
        CHECK(m <= 10);
    }
}

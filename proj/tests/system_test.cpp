#include <doctest.h>

#include <cstdint>
#include <optional>
#include <random>
#include <stdexcept>
#include <unordered_set>

#include "opq/oracle.hpp"
#include "opq/system.hpp"

using opq::MonitorMode;
using opq::Packet;
using opq::PriorityQueueOracle;
using opq::SlotInput;
using opq::SwitchSystem;

TEST_CASE("construction wires the groups from the derived parameters") {
    SwitchSystem sys(5);
    CHECK(sys.params().group_count() == 9);
    CHECK(sys.occupancy() == 0);
    const std::uint64_t capacities[] = {1, 1, 2, 4, 8, 4, 2, 1, 1};
    for (unsigned j = 1; j <= 9; ++j) {
        CHECK(sys.params().buffer(j) == capacities[j - 1]);
        CHECK(sys.rr_pointer(j) == 0);
        const auto occ = sys.group_occupancy(j);
        CHECK(occ[0] + occ[1] + occ[2] == 0);
    }
    CHECK(SwitchSystem(1).params().group_count() == 1);
    CHECK(SwitchSystem(2).params().group_count() == 3);
}

TEST_CASE("a requested arrival passes straight through") {
    SwitchSystem sys(5);
    auto r = sys.step({Packet{1, 500}, true});
    REQUIRE(r.output.departed.has_value());
    CHECK(r.output.departed->id == 1);
    CHECK(r.output.occupancy == 0);
    for (unsigned j = 1; j <= 9; ++j) {
        CHECK(sys.rr_pointer(j) == 0);
    }
    CHECK(sys.violations().empty());
}

TEST_CASE("the first buffered packet takes link 1 of group 1") {
    SwitchSystem sys(5);
    auto r = sys.step({Packet{1, 500}, false});
    CHECK(!r.output.departed.has_value());
    CHECK(r.output.occupancy == 1);
    // link (u+1)%12 = 1 belongs to multiplexer 1
    CHECK(sys.group_occupancy(1) == std::array<std::uint64_t, 3>{0, 1, 0});
    CHECK(sys.rr_pointer(1) == 1);
    CHECK(r.trace.group_entrants[0] == 1);
}

TEST_CASE("a second buffered packet pushes the first to group 2") {
    SwitchSystem sys(5);
    sys.step({Packet{1, 10}, false});
    auto r = sys.step({Packet{2, 20}, false});
    CHECK(r.output.occupancy == 2);
    // tag 1 (the new arrival) re-enters group 1 on link 2; tag 2 (the old
    // packet) moves to group 2 on link 1
    CHECK(sys.group_occupancy(1) == std::array<std::uint64_t, 3>{0, 0, 1});
    CHECK(sys.rr_pointer(1) == 2);
    CHECK(sys.group_occupancy(2) == std::array<std::uint64_t, 3>{0, 1, 0});
    CHECK(sys.rr_pointer(2) == 1);
    CHECK(r.trace.group_entrants[0] == 1);
    CHECK(r.trace.group_entrants[1] == 1);
    CHECK(sys.violations().empty());
}

TEST_CASE("tags rank by descending priority") {
    SwitchSystem sys(5);
    sys.step({Packet{1, 10}, false});
    sys.step({Packet{2, 30}, false});

    auto tags = sys.compute_tags(Packet{3, 20});
    REQUIRE(tags.size() == 3);
    CHECK(tags[0].first.priority == 30);
    CHECK(tags[0].second == 1);
    CHECK(tags[1].first.priority == 20);
    CHECK(tags[1].second == 2);
    CHECK(tags[2].first.priority == 10);
    CHECK(tags[2].second == 3);

    SwitchSystem empty(3);
    auto single = empty.compute_tags(Packet{9, 77});
    REQUIRE(single.size() == 1);
    CHECK(single[0].second == 1);
}

TEST_CASE("an arrival below a full system ranks B*+1") {
    SwitchSystem sys(5);
    for (std::uint64_t i = 1; i <= 46; ++i) {
        sys.step({Packet{i, 1000 + i}, false});
    }
    REQUIRE(sys.occupancy() == 46);
    auto tags = sys.compute_tags(Packet{99, 5});
    REQUIRE(tags.size() == 47);
    CHECK(tags.back().first.id == 99);
    CHECK(tags.back().second == 47);
    CHECK(sys.violations().empty());
}

TEST_CASE("duplicate arrival priorities are rejected") {
    SwitchSystem sys(3);
    sys.step({Packet{1, 42}, false});
    CHECK_THROWS_AS(sys.step({Packet{2, 42}, false}), std::invalid_argument);
    CHECK_THROWS_AS(sys.compute_tags(Packet{3, 42}), std::invalid_argument);
}

TEST_CASE("ell=1 loss and full-pressure request edge") {
    SwitchSystem sys(1, MonitorMode::strict);
    REQUIRE(sys.params().b_star() == 1);

    sys.step({Packet{1, 10}, false});
    CHECK(sys.occupancy() == 1);

    // full buffer, no request: the lower-priority packet is dropped
    auto r = sys.step({Packet{2, 20}, false});
    REQUIRE(r.output.lost.has_value());
    CHECK(r.output.lost->id == 1);
    CHECK(r.output.occupancy == 1);

    // full buffer, arrival and request together: the best departs and the
    // leftover takes the patched route into the last group
    r = sys.step({Packet{3, 30}, true});
    REQUIRE(r.output.departed.has_value());
    CHECK(r.output.departed->id == 3);
    CHECK(!r.output.lost.has_value());
    CHECK(r.output.occupancy == 1);
    CHECK(sys.stats().patched_routes == 1);
    CHECK(sys.stats().full_arrival_request_slots == 1);
}

TEST_CASE("trace records carry the per-slot schema") {
    SwitchSystem sys(2);
    auto r = sys.step({Packet{1, 10}, false});
    CHECK(r.trace.t == 1);
    CHECK(r.trace.arrival);
    CHECK(!r.trace.request);
    CHECK(r.trace.occupancy == 1);
    CHECK(r.trace.group_occupancy.size() == 3);
    CHECK(r.trace.group_entrants.size() == 3);
    CHECK(r.trace.rr_pointers.size() == 3);

    const std::string line = opq::to_json_line(r.trace);
    CHECK(line.find("\"t\":1") != std::string::npos);
    CHECK(line.find("\"a\":1") != std::string::npos);
    CHECK(line.find("\"departed_id\":null") != std::string::npos);
    CHECK(line.find("\"u\":[1,0,0]") != std::string::npos);
}

TEST_CASE("the system tracks the reference queue slot by slot") {
    std::mt19937_64 rng(11);
    for (unsigned ell : {1u, 2u, 3u}) {
        SwitchSystem sys(ell, MonitorMode::strict);
        PriorityQueueOracle oracle(sys.params().b_star());
        std::uint64_t next_id = 1;
        std::unordered_set<std::uint64_t> used;
        for (int t = 0; t < 400; ++t) {
            SlotInput in;
            if (rng() % 2 == 0) {
                std::uint64_t prio;
                do {
                    prio = rng();
                } while (!used.insert(prio).second);
                in.arrival = Packet{next_id++, prio};
            }
            in.request = rng() % 2 == 0;
            auto sys_out = sys.step(in);
            auto orc_out = oracle.step(in);
            REQUIRE(sys_out.output.departed == orc_out.departed);
            REQUIRE(sys_out.output.lost == orc_out.lost);
            REQUIRE(sys_out.output.occupancy == orc_out.occupancy);
        }
        CHECK(sys.violations().empty());
    }
}

TEST_CASE("monitor modes do not change behaviour") {
    SwitchSystem checked(3, MonitorMode::record);
    SwitchSystem fast(3, MonitorMode::off);
    std::mt19937_64 rng(5);
    std::uint64_t next_id = 1;
    for (int t = 0; t < 300; ++t) {
        SlotInput in;
        if (rng() % 3 != 0) {
            in.arrival = Packet{next_id++, rng()};
        }
        in.request = rng() % 3 == 0;
        auto a = checked.step(in);
        auto b = fast.step(in);
        REQUIRE(a.output.departed == b.output.departed);
        REQUIRE(a.output.lost == b.output.lost);
        REQUIRE(a.output.occupancy == b.output.occupancy);
    }
    CHECK(checked.violations().empty());
}

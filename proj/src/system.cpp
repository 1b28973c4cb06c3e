#include "opq/system.hpp"

#include <algorithm>
#include <cstdlib>
#include <limits>

#include <json.hpp>

namespace opq {

SwitchSystem::SwitchSystem(unsigned ell, MonitorMode mode)
    : params_(derive_params(ell)), mode_(mode) {
    const unsigned groups = params_.group_count();
    groups_.resize(groups);
    for (unsigned j = 1; j <= groups; ++j) {
        Group& g = groups_[j - 1];
        g.muxes.reserve(QueueParams::kMuxesPerGroup);
        for (unsigned i = 0; i < QueueParams::kMuxesPerGroup; ++i) {
            g.muxes.emplace_back(4, params_.buffer(j));
        }
    }
    stats_.max_entrants.assign(groups, 0);
    stats_.max_occupancy.assign(groups, 0);
}

std::size_t SwitchSystem::index_position(std::uint64_t priority) const {
    auto it = std::lower_bound(index_.begin(), index_.end(), priority,
                               [](const IndexEntry& e, std::uint64_t p) {
                                   return e.priority > p;
                               });
    return static_cast<std::size_t>(it - index_.begin());
}

bool SwitchSystem::in_index(std::uint64_t priority) const {
    std::size_t pos = index_position(priority);
    return pos < index_.size() && index_[pos].priority == priority;
}

void SwitchSystem::erase_from_index(std::uint64_t priority) {
    std::size_t pos = index_position(priority);
    if (pos < index_.size() && index_[pos].priority == priority) {
        index_.erase(index_.begin() + static_cast<std::ptrdiff_t>(pos));
    }
}

void SwitchSystem::report(std::uint64_t slot, const char* invariant,
                          std::string detail) {
    if (mode_ == MonitorMode::strict) {
        throw InvariantViolation(std::string(invariant) + " at slot " +
                                 std::to_string(slot) + ": " + detail);
    }
    violations_.push_back(Violation{slot, invariant, std::move(detail)});
}

// Ranks every packet (system plus arrival) for slot t_ and runs the
// tag-drift monitors against the ranks stamped in the previous slot.
void SwitchSystem::sweep_tags(const std::optional<Packet>& arrival) {
    const std::size_t arrival_pos =
        arrival ? index_position(arrival->priority) : index_.size() + 1;
    std::uint64_t rank = 0;
    bool have_delta = false;
    std::int64_t delta_min = 0, delta_max = 0;
    for (std::size_t i = 0; i <= index_.size(); ++i) {
        if (arrival && i == arrival_pos) {
            ++rank;  // the arrival occupies this rank; it has no history
        }
        if (i == index_.size()) {
            break;
        }
        IndexEntry& e = index_[i];
        ++rank;
        if (e.tag_slot == t_ - 1) {
            const std::int64_t delta =
                static_cast<std::int64_t>(rank) - static_cast<std::int64_t>(e.tag);
            if (delta < -1 || delta > 1) {
                report(t_, "TAG-DRIFT",
                       "packet " + std::to_string(e.id) + " tag " +
                           std::to_string(e.tag) + " -> " + std::to_string(rank));
            }
            if (!have_delta) {
                delta_min = delta_max = delta;
                have_delta = true;
            } else {
                delta_min = std::min(delta_min, delta);
                delta_max = std::max(delta_max, delta);
            }
        }
        e.tag = rank;
        e.tag_slot = t_;
    }
    if (have_delta && delta_max - delta_min > 1) {
        report(t_, "PAIR-DRIFT",
               "tag deltas span [" + std::to_string(delta_min) + ", " +
                   std::to_string(delta_max) + "]");
    }
}

void SwitchSystem::check_end_of_slot(bool patch_fired) {
    const unsigned groups = params_.group_count();
    const std::uint64_t cap = params_.b_star();
    constexpr std::uint64_t kNone = std::numeric_limits<std::uint64_t>::max();

    std::vector<std::uint64_t> tag_min(groups + 1, kNone);
    std::vector<std::uint64_t> tag_max(groups + 1, 0);
    std::vector<std::uint64_t> count(groups + 1, 0);
    for (const IndexEntry& e : index_) {
        const unsigned j = e.group;
        const bool patched = patch_fired && j == groups && e.tag == cap + 1;
        if (!patched &&
            (e.tag < params_.tag_floor(j) || e.tag > params_.tag_ceiling(j))) {
            report(t_, "TAG-RANGE",
                   "packet " + std::to_string(e.id) + " tag " +
                       std::to_string(e.tag) + " buffered at group " +
                       std::to_string(j));
        }
        ++count[j];
        tag_min[j] = std::min(tag_min[j], e.tag);
        tag_max[j] = std::max(tag_max[j], e.tag);
    }

    std::uint64_t total = 0;
    for (unsigned j = 1; j <= groups; ++j) {
        const std::uint64_t spread_bound = 3 * params_.buffer(j) - 2;
        if (count[j] > params_.occupancy_bound(j)) {
            report(t_, "GROUP-SPREAD",
                   "group " + std::to_string(j) + " holds " +
                       std::to_string(count[j]) + " > " +
                       std::to_string(params_.occupancy_bound(j)) + " packets");
        }
        if (count[j] >= 2 && tag_max[j] - tag_min[j] > spread_bound) {
            report(t_, "GROUP-SPREAD",
                   "group " + std::to_string(j) + " tag spread " +
                       std::to_string(tag_max[j] - tag_min[j]) + " > " +
                       std::to_string(spread_bound));
        }

        const Group& g = groups_[j - 1];
        const std::uint64_t occ[3] = {g.muxes[0].occupancy(),
                                      g.muxes[1].occupancy(),
                                      g.muxes[2].occupancy()};
        const unsigned k = g.rr % 3;
        const bool ordered = occ[k] >= occ[(k + 2) % 3] &&
                             occ[(k + 2) % 3] >= occ[(k + 1) % 3];
        if (!ordered || occ[k] - occ[(k + 1) % 3] > 1) {
            report(t_, "BALANCE",
                   "group " + std::to_string(j) + " occupancies (" +
                       std::to_string(occ[0]) + "," + std::to_string(occ[1]) +
                       "," + std::to_string(occ[2]) + ") with u=" +
                       std::to_string(g.rr));
        }
        total += occ[0] + occ[1] + occ[2];
        if (count[j] != occ[0] + occ[1] + occ[2]) {
            report(t_, "STATE",
                   "index count for group " + std::to_string(j) +
                       " disagrees with multiplexer occupancy");
        }
    }
    if (total != index_.size()) {
        report(t_, "STATE", "controller index size " +
                                std::to_string(index_.size()) +
                                " != buffered packets " + std::to_string(total));
    }
    if (index_.size() > cap) {
        report(t_, "OCCUPANCY",
               "occupancy " + std::to_string(index_.size()) + " > B*");
    }
}

SwitchSystem::StepResult SwitchSystem::step(const SlotInput& input) {
    ++t_;
    const std::uint64_t q_prev = index_.size();
    const std::uint64_t cap = params_.b_star();
    const unsigned groups = params_.group_count();
    const bool monitoring = mode_ != MonitorMode::off;

    if (input.arrival && in_index(input.arrival->priority)) {
        throw std::invalid_argument("duplicate packet priority " +
                                    std::to_string(input.arrival->priority));
    }
    const std::uint64_t in_flight = q_prev + (input.arrival ? 1 : 0);

    // Every nonempty multiplexer puts its FIFO head on the switch.
    struct Entrant {
        Packet packet;
        unsigned from_group;  // 0 = external arrival link
    };
    std::vector<Entrant> entrants;
    entrants.reserve(3 * groups + 1);
    for (unsigned j = 1; j <= groups; ++j) {
        for (FifoMux& mux : groups_[j - 1].muxes) {
            if (std::optional<Packet> head = mux.emit()) {
                entrants.push_back({*head, j});
            }
        }
    }

    // Rank among all packets present at the beginning of the slot, the
    // arrival included; tag 1 = highest priority.
    auto rank_of = [&](std::uint64_t priority) -> std::uint64_t {
        std::uint64_t higher = index_position(priority);
        if (input.arrival && input.arrival->priority > priority) {
            ++higher;
        }
        return higher + 1;
    };

    if (monitoring) {
        sweep_tags(input.arrival);
    }

    // Departure: the best of the arrival and the heads of groups 1 and 2.
    std::optional<Packet> departed;
    if (input.request && in_flight > 0) {
        const Packet* best = input.arrival ? &*input.arrival : nullptr;
        for (const Entrant& e : entrants) {
            if (e.from_group >= 1 && e.from_group <= 2 &&
                (!best || e.packet.priority > best->priority)) {
                best = &e.packet;
            }
        }
        if (best) {
            departed = *best;
            if (monitoring && rank_of(best->priority) != 1) {
                report(t_, "DEPART-RANK",
                       "departing packet " + std::to_string(best->id) +
                           " has tag " + std::to_string(rank_of(best->priority)));
            }
        } else if (monitoring) {
            report(t_, "DEPART-RANK", "no packet on the departure-side links");
        }
    }

    // Loss: the worst of the arrival and the heads of the last group.
    std::optional<Packet> lost;
    if (!input.request && input.arrival && q_prev == cap) {
        const Packet* worst = &*input.arrival;
        for (const Entrant& e : entrants) {
            if (e.from_group == groups && e.packet.priority < worst->priority) {
                worst = &e.packet;
            }
        }
        lost = *worst;
        if (monitoring && rank_of(worst->priority) != cap + 1) {
            report(t_, "LOSS-RANK",
                   "lost packet " + std::to_string(worst->id) + " has tag " +
                       std::to_string(rank_of(worst->priority)));
        }
    }

    if (input.request && input.arrival && q_prev == cap) {
        ++stats_.full_arrival_request_slots;
    }

    // Self-routing of everything else entering the switch.
    if (input.arrival) {
        entrants.push_back({*input.arrival, 0});
    }
    struct RoutedPacket {
        Packet packet;
        std::uint64_t tag;
    };
    std::vector<std::vector<RoutedPacket>> buckets(groups + 1);
    bool patch_fired = false;
    bool arrival_admitted = false;
    unsigned arrival_group = 0;
    std::uint64_t arrival_tag = 0;
    for (const Entrant& e : entrants) {
        if (departed && e.packet.priority == departed->priority) {
            continue;
        }
        if (lost && e.packet.priority == lost->priority) {
            continue;
        }
        const std::uint64_t tag = rank_of(e.packet.priority);
        unsigned dest;
        if (tag <= cap) {
            dest = group_for_tag(tag, params_);
        } else if (tag == cap + 1 && input.request) {
            // Full buffer with simultaneous arrival and request: after the
            // departure this packet ranks B*, the last group's tag set.
            dest = groups;
            patch_fired = true;
            ++stats_.patched_routes;
        } else {
            throw InvariantViolation("unroutable tag " + std::to_string(tag) +
                                     " at slot " + std::to_string(t_));
        }
        if (monitoring && e.from_group != 0) {
            const unsigned gap = e.from_group > dest ? e.from_group - dest
                                                     : dest - e.from_group;
            if (gap > 1) {
                report(t_, "SOURCE-LOCALITY",
                       "packet " + std::to_string(e.packet.id) +
                           " moved from group " + std::to_string(e.from_group) +
                           " to group " + std::to_string(dest));
            }
        }
        if (e.from_group != 0) {
            index_[index_position(e.packet.priority)].group = dest;
        } else {
            arrival_admitted = true;
            arrival_group = dest;
            arrival_tag = tag;
        }
        buckets[dest].push_back({e.packet, tag});
    }

    // Round-robin link assignment and multiplexer ingestion.
    std::vector<Packet> overflow;
    std::vector<std::uint32_t> entrant_counts(groups, 0);
    for (unsigned j = 1; j <= groups; ++j) {
        std::vector<RoutedPacket>& bucket = buckets[j];
        const unsigned k = static_cast<unsigned>(bucket.size());
        entrant_counts[j - 1] = k;
        stats_.max_entrants[j - 1] = std::max(stats_.max_entrants[j - 1], k);
        if (k == 0) {
            continue;
        }
        if (k > QueueParams::kInputsPerGroup) {
            throw InvariantViolation("collision: " + std::to_string(k) +
                                     " packets entering group " +
                                     std::to_string(j) + " at slot " +
                                     std::to_string(t_));
        }
        if (monitoring && k > 10) {
            report(t_, "COLLISION-FREE",
                   std::to_string(k) + " packets entering group " +
                       std::to_string(j));
        }
        // Links (u+1)%12 .. (u+k)%12 in descending priority order.
        std::sort(bucket.begin(), bucket.end(),
                  [](const RoutedPacket& a, const RoutedPacket& b) {
                      return a.packet.priority > b.packet.priority;
                  });
        Group& group = groups_[j - 1];
        std::array<std::vector<MuxArrival>, 3> per_mux;
        for (unsigned idx = 0; idx < k; ++idx) {
            const unsigned link =
                (group.rr + 1 + idx) % QueueParams::kInputsPerGroup;
            per_mux[link % 3].push_back({link / 3, bucket[idx].packet});
        }
        group.rr = (group.rr + k) % QueueParams::kInputsPerGroup;
        for (unsigned m = 0; m < 3; ++m) {
            if (per_mux[m].empty()) {
                continue;
            }
            std::vector<Packet> dropped = group.muxes[m].ingest(per_mux[m]);
            for (const Packet& p : dropped) {
                if (mode_ == MonitorMode::record) {
                    report(t_, "NO-OVERFLOW",
                           "multiplexer " + std::to_string(m) + " of group " +
                               std::to_string(j) + " dropped packet " +
                               std::to_string(p.id));
                    overflow.push_back(p);
                } else {
                    throw InvariantViolation(
                        "multiplexer overflow at group " + std::to_string(j) +
                        " slot " + std::to_string(t_));
                }
            }
        }
    }

    // Controller bookkeeping.
    const bool arrival_departed =
        departed && input.arrival && departed->priority == input.arrival->priority;
    const bool arrival_lost =
        lost && input.arrival && lost->priority == input.arrival->priority;
    if (departed && !arrival_departed) {
        erase_from_index(departed->priority);
    }
    if (lost && !arrival_lost) {
        erase_from_index(lost->priority);
    }
    for (const Packet& p : overflow) {
        if (input.arrival && p.priority == input.arrival->priority) {
            arrival_admitted = false;
        } else {
            erase_from_index(p.priority);
        }
    }
    if (input.arrival && arrival_admitted && !arrival_departed && !arrival_lost) {
        IndexEntry entry;
        entry.priority = input.arrival->priority;
        entry.id = input.arrival->id;
        entry.tag = arrival_tag;
        entry.tag_slot = t_;
        entry.group = arrival_group;
        const std::size_t pos = index_position(entry.priority);
        index_.insert(index_.begin() + static_cast<std::ptrdiff_t>(pos), entry);
    }

    if (monitoring) {
        check_end_of_slot(patch_fired);
    }

    StepResult result;
    result.output.departed = departed;
    result.output.lost = lost;
    result.output.occupancy = index_.size();

    TraceRecord& trace = result.trace;
    trace.t = t_;
    trace.arrival = input.arrival.has_value();
    trace.request = input.request;
    trace.occupancy = index_.size();
    trace.departed = departed;
    trace.lost = lost;
    trace.group_occupancy.resize(groups);
    trace.rr_pointers.resize(groups);
    trace.group_entrants = std::move(entrant_counts);
    for (unsigned j = 1; j <= groups; ++j) {
        const Group& g = groups_[j - 1];
        const std::uint64_t occ = g.muxes[0].occupancy() +
                                  g.muxes[1].occupancy() +
                                  g.muxes[2].occupancy();
        trace.group_occupancy[j - 1] = occ;
        trace.rr_pointers[j - 1] = g.rr;
        stats_.max_occupancy[j - 1] = std::max(stats_.max_occupancy[j - 1], occ);
    }
    return result;
}

std::vector<std::pair<Packet, std::uint64_t>> SwitchSystem::compute_tags(
    const std::optional<Packet>& arrival) const {
    if (arrival && in_index(arrival->priority)) {
        throw std::invalid_argument("duplicate packet priority " +
                                    std::to_string(arrival->priority));
    }
    std::vector<std::pair<Packet, std::uint64_t>> tags;
    tags.reserve(index_.size() + 1);
    const std::size_t arrival_pos =
        arrival ? index_position(arrival->priority) : index_.size() + 1;
    std::uint64_t rank = 0;
    for (std::size_t i = 0; i <= index_.size(); ++i) {
        if (arrival && i == arrival_pos) {
            tags.emplace_back(*arrival, ++rank);
        }
        if (i == index_.size()) {
            break;
        }
        tags.emplace_back(Packet{index_[i].id, index_[i].priority}, ++rank);
    }
    return tags;
}

std::array<std::uint64_t, 3> SwitchSystem::group_occupancy(unsigned j) const {
    const Group& g = groups_.at(j - 1);
    return {g.muxes[0].occupancy(), g.muxes[1].occupancy(),
            g.muxes[2].occupancy()};
}

unsigned SwitchSystem::rr_pointer(unsigned j) const {
    return groups_.at(j - 1).rr;
}

std::string to_json_line(const TraceRecord& record) {
    nlohmann::ordered_json line;
    line["t"] = record.t;
    line["a"] = record.arrival ? 1 : 0;
    line["c"] = record.request ? 1 : 0;
    line["d"] = record.departed ? 1 : 0;
    line["l"] = record.lost ? 1 : 0;
    line["q"] = record.occupancy;
    line["departed_id"] =
        record.departed ? nlohmann::ordered_json(record.departed->id)
                        : nlohmann::ordered_json(nullptr);
    line["departed_prio"] =
        record.departed ? nlohmann::ordered_json(record.departed->priority)
                        : nlohmann::ordered_json(nullptr);
    line["lost_id"] = record.lost ? nlohmann::ordered_json(record.lost->id)
                                  : nlohmann::ordered_json(nullptr);
    line["lost_prio"] =
        record.lost ? nlohmann::ordered_json(record.lost->priority)
                    : nlohmann::ordered_json(nullptr);
    line["group_occupancy"] = record.group_occupancy;
    line["group_entrants"] = record.group_entrants;
    line["u"] = record.rr_pointers;
    return line.dump();
}

}  // namespace opq

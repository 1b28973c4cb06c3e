#include "opq/workload.hpp"

#include <charconv>
#include <random>
#include <stdexcept>
#include <unordered_set>

namespace opq {

namespace {

std::uint64_t parse_u64(std::string_view text) {
    std::uint64_t value = 0;
    const char* begin = text.data();
    const char* end = begin + text.size();
    auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc() || ptr != end) {
        throw std::invalid_argument("malformed number '" + std::string(text) +
                                    "'");
    }
    return value;
}

}  // namespace

Probability Probability::parse(std::string_view text) {
    Probability p;
    if (auto slash = text.find('/'); slash != std::string_view::npos) {
        p.num = parse_u64(text.substr(0, slash));
        p.den = parse_u64(text.substr(slash + 1));
    } else if (auto dot = text.find('.'); dot != std::string_view::npos) {
        const std::string_view whole = text.substr(0, dot);
        const std::string_view frac = text.substr(dot + 1);
        if (frac.empty() || frac.size() > 18) {
            throw std::invalid_argument("malformed probability '" +
                                        std::string(text) + "'");
        }
        std::uint64_t den = 1;
        for (std::size_t i = 0; i < frac.size(); ++i) {
            den *= 10;
        }
        p.den = den;
        p.num = parse_u64(whole) * den + parse_u64(frac);
    } else {
        p.num = parse_u64(text);
        p.den = 1;
    }
    if (!p.valid()) {
        throw std::invalid_argument("probability '" + std::string(text) +
                                    "' outside [0,1]");
    }
    return p;
}

namespace {

// Exact Bernoulli(num/den) on a 64-bit draw. Degenerate probabilities do not
// consume randomness.
bool bernoulli(std::mt19937_64& rng, const Probability& p) {
    if (p.num == 0) {
        return false;
    }
    if (p.num >= p.den) {
        return true;
    }
    const unsigned __int128 lhs =
        static_cast<unsigned __int128>(rng()) * p.den;
    const unsigned __int128 rhs = static_cast<unsigned __int128>(p.num) << 64;
    return lhs < rhs;
}

// Priorities drawn without replacement from the 64-bit range.
class PriorityDrawer {
public:
    std::uint64_t draw(std::mt19937_64& rng) {
        for (;;) {
            const std::uint64_t p = rng();
            if (p != 0 && used_.insert(p).second) {
                return p;
            }
        }
    }

private:
    std::unordered_set<std::uint64_t> used_;
};

}  // namespace

std::string_view workload_family_name(WorkloadFamily family) {
    switch (family) {
        case WorkloadFamily::uniform_random: return "uniform-random";
        case WorkloadFamily::burst: return "burst";
        case WorkloadFamily::fifo_order: return "fifo-order";
        case WorkloadFamily::lifo_order: return "lifo-order";
        case WorkloadFamily::full_pressure: return "full-pressure";
        case WorkloadFamily::adversarial_sweep: return "adversarial-sweep";
    }
    throw std::invalid_argument("unknown workload family");
}

WorkloadFamily workload_family_from_name(std::string_view name) {
    for (WorkloadFamily family : kAllFamilies) {
        if (workload_family_name(family) == name) {
            return family;
        }
    }
    throw std::invalid_argument("unknown workload family '" +
                                std::string(name) + "'");
}

std::vector<SlotInput> generate_workload(const WorkloadSpec& spec) {
    if (spec.slots == 0) {
        throw std::invalid_argument("workload needs at least one slot");
    }
    if (!spec.arrival_prob.valid() || !spec.request_prob.valid()) {
        throw std::invalid_argument("probabilities must be rationals in [0,1]");
    }

    std::mt19937_64 rng(spec.seed);
    PriorityDrawer priorities;
    std::vector<SlotInput> out;
    out.reserve(spec.slots);
    std::uint64_t next_id = 1;

    auto make_packet = [&](std::uint64_t priority) {
        return Packet{next_id++, priority};
    };

    switch (spec.family) {
        case WorkloadFamily::uniform_random: {
            for (std::uint64_t t = 0; t < spec.slots; ++t) {
                const bool a = bernoulli(rng, spec.arrival_prob);
                const bool c = bernoulli(rng, spec.request_prob);
                SlotInput in;
                if (a) {
                    in.arrival = make_packet(priorities.draw(rng));
                }
                in.request = c;
                out.push_back(std::move(in));
            }
            break;
        }
        case WorkloadFamily::burst: {
            const std::uint64_t phase_cap =
                std::max<std::uint64_t>(4, spec.slots / 8);
            bool arrivals_phase = true;
            std::uint64_t remaining = 0;
            for (std::uint64_t t = 0; t < spec.slots; ++t) {
                if (remaining == 0) {
                    remaining = 1 + rng() % phase_cap;
                }
                SlotInput in;
                if (arrivals_phase) {
                    in.arrival = make_packet(priorities.draw(rng));
                } else {
                    in.request = true;
                }
                out.push_back(std::move(in));
                if (--remaining == 0) {
                    arrivals_phase = !arrivals_phase;
                }
            }
            break;
        }
        case WorkloadFamily::fifo_order:
        case WorkloadFamily::lifo_order: {
            const bool decreasing = spec.family == WorkloadFamily::fifo_order;
            std::uint64_t cursor = decreasing ? (std::uint64_t{1} << 62) : 1;
            for (std::uint64_t t = 0; t < spec.slots; ++t) {
                const bool a = bernoulli(rng, spec.arrival_prob);
                const bool c = bernoulli(rng, spec.request_prob);
                SlotInput in;
                if (a) {
                    in.arrival = make_packet(cursor);
                    const std::uint64_t step = 1 + (rng() & 0xFFFFF);
                    cursor = decreasing ? cursor - step : cursor + step;
                }
                in.request = c;
                out.push_back(std::move(in));
            }
            break;
        }
        case WorkloadFamily::full_pressure: {
            for (std::uint64_t t = 0; t < spec.slots; ++t) {
                SlotInput in;
                in.arrival = make_packet(priorities.draw(rng));
                in.request = bernoulli(rng, spec.request_prob);
                out.push_back(std::move(in));
            }
            break;
        }
        case WorkloadFamily::adversarial_sweep: {
            // Fill beyond any tested buffer, hammer the full queue with
            // simultaneous arrivals and requests, then drain below empty.
            const std::uint64_t phase =
                std::max<std::uint64_t>(8, spec.slots / 16);
            for (std::uint64_t t = 0; t < spec.slots; ++t) {
                const std::uint64_t pos = t % (3 * phase);
                SlotInput in;
                if (pos < phase) {
                    in.arrival = make_packet(priorities.draw(rng));
                } else if (pos < 2 * phase) {
                    in.arrival = make_packet(priorities.draw(rng));
                    in.request = true;
                } else {
                    in.request = true;
                }
                out.push_back(std::move(in));
            }
            break;
        }
    }
    return out;
}

}  // namespace opq

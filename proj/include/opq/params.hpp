#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace opq {

// Closed interval of tags <lo,hi>.
struct TagRange {
    std::uint64_t lo = 0;
    std::uint64_t hi = 0;

    std::uint64_t size() const { return hi - lo + 1; }
    bool contains(std::uint64_t tag) const { return lo <= tag && tag <= hi; }

    friend bool operator==(const TagRange&, const TagRange&) = default;
};

// Static parameters of the switching system, all derived from the single
// integer ell:
//
//   group_count = 2*ell - 1 groups of three 4-to-1 multiplexers
//   buffer(j)   = per-multiplexer buffer B_j of group j
//   tag_set(j)  = the contiguous tag interval Psi_j routed to group j
//   b_star      = total queue buffer B* = 3 * 2^(ell-1) - 2
//
// Groups are 1-based (j = 1..2*ell-1); multiplexers and input links within a
// group are 0-based. Instances are immutable once derived and safe to share
// across threads.
class QueueParams {
public:
    static constexpr unsigned kInputsPerGroup = 12;
    static constexpr unsigned kMuxesPerGroup = 3;
    // Default ceiling on ell; keeps B* comfortably inside 64 bits.
    static constexpr unsigned kDefaultMaxEll = 40;

    unsigned ell() const { return ell_; }
    unsigned group_count() const { return 2 * ell_ - 1; }
    std::uint64_t b_star() const { return b_star_; }

    std::uint64_t buffer(unsigned j) const { return buffers_.at(j - 1); }
    const TagRange& tag_set(unsigned j) const { return tag_sets_.at(j - 1); }

    // Extreme tags a packet buffered at group j can carry:
    // [lo(Psi_j) - B_j + 1, hi(Psi_j) + B_j - 1].
    std::uint64_t tag_floor(unsigned j) const {
        return tag_set(j).lo - buffer(j) + 1;
    }
    std::uint64_t tag_ceiling(unsigned j) const {
        return tag_set(j).hi + buffer(j) - 1;
    }

    // Most packets group j can ever hold across its three multiplexers
    // (3*B_j - 1).
    std::uint64_t occupancy_bound(unsigned j) const { return 3 * buffer(j) - 1; }

    friend QueueParams derive_params(unsigned ell, unsigned max_ell);

private:
    QueueParams() = default;

    unsigned ell_ = 0;
    std::uint64_t b_star_ = 0;
    std::vector<std::uint64_t> buffers_;
    std::vector<TagRange> tag_sets_;
};

// Derives and validates all parameters for a given ell. Throws
// std::invalid_argument when ell == 0 or ell exceeds max_ell (which is itself
// clamped to 63 so B* fits in 64 bits).
QueueParams derive_params(unsigned ell,
                          unsigned max_ell = QueueParams::kDefaultMaxEll);

// The unique group j with tag in Psi_j. Throws std::out_of_range unless
// 1 <= tag <= B*. O(log ell).
unsigned group_for_tag(std::uint64_t tag, const QueueParams& params);

// Human-readable parameter table: one row per group with B_j, Psi_j, the tag
// range, and the per-group occupancy bound.
std::string render_parameter_table(const QueueParams& params);

}  // namespace opq

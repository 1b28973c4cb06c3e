#include "opq/params.hpp"

#include <algorithm>
#include <iomanip>
#include <sstream>
#include <stdexcept>

namespace opq {

QueueParams derive_params(unsigned ell, unsigned max_ell) {
    if (ell == 0) {
        throw std::invalid_argument("ell must be >= 1");
    }
    // B* = 3 * 2^(ell-1) - 2 overflows 64 bits beyond ell = 63.
    const unsigned cap = std::min(max_ell, 63u);
    if (ell > cap) {
        throw std::invalid_argument("ell " + std::to_string(ell) +
                                    " exceeds the maximum of " +
                                    std::to_string(cap));
    }

    const unsigned groups = 2 * ell - 1;
    QueueParams p;
    p.ell_ = ell;
    p.b_star_ = (std::uint64_t{3} << (ell - 1)) - 2;
    p.buffers_.resize(groups);
    p.tag_sets_.resize(groups);

    const std::uint64_t base = std::uint64_t{3} << (ell - 1);
    for (unsigned j = 1; j <= groups; ++j) {
        std::uint64_t b;
        if (j == 1 || j == groups) {
            b = 1;
        } else if (j <= ell) {
            b = std::uint64_t{1} << (j - 2);
        } else {
            b = std::uint64_t{1} << (2 * ell - j - 2);
        }
        p.buffers_[j - 1] = b;

        TagRange psi;
        if (j <= ell) {
            psi.lo = std::uint64_t{1} << (j - 1);
            psi.hi = (std::uint64_t{1} << j) - 1;
        } else {
            psi.lo = base - (std::uint64_t{1} << (2 * ell - j));
            psi.hi = base - (std::uint64_t{1} << (2 * ell - j - 1)) - 1;
        }
        p.tag_sets_[j - 1] = psi;
    }

    // Consistency of the derivation; none of these can fail.
    if (p.tag_sets_.front().lo != 1 || p.tag_sets_.back().hi != p.b_star_) {
        throw std::logic_error("parameter derivation out of range");
    }
    for (unsigned j = 1; j <= groups; ++j) {
        const TagRange& psi = p.tag_sets_[j - 1];
        const std::uint64_t expected =
            (j == 1 || j == groups) ? p.buffers_[j - 1] : 2 * p.buffers_[j - 1];
        if (psi.lo > psi.hi || psi.size() != expected) {
            throw std::logic_error("tag set size mismatch");
        }
        if (j < groups && psi.hi + 1 != p.tag_sets_[j].lo) {
            throw std::logic_error("tag sets not contiguous");
        }
    }
    return p;
}

unsigned group_for_tag(std::uint64_t tag, const QueueParams& params) {
    if (tag == 0 || tag > params.b_star()) {
        throw std::out_of_range("tag " + std::to_string(tag) +
                                " outside [1, B*]");
    }
    // Tag sets are contiguous and sorted; find the last one starting at or
    // below the tag.
    unsigned lo = 1, hi = params.group_count();
    while (lo < hi) {
        unsigned mid = (lo + hi + 1) / 2;
        if (params.tag_set(mid).lo <= tag) {
            lo = mid;
        } else {
            hi = mid - 1;
        }
    }
    return lo;
}

namespace {

std::string format_range(const TagRange& r) {
    if (r.lo == r.hi) {
        return "{" + std::to_string(r.lo) + "}";
    }
    return "<" + std::to_string(r.lo) + "," + std::to_string(r.hi) + ">";
}

}  // namespace

std::string render_parameter_table(const QueueParams& params) {
    std::ostringstream out;
    out << "ell = " << params.ell() << ", groups = " << params.group_count()
        << ", B* = " << params.b_star() << "\n";
    out << std::left << std::setw(5) << "j" << std::setw(8) << "B_j"
        << std::setw(16) << "Psi_j" << std::setw(16) << "tag range"
        << "max buffered" << "\n";
    for (unsigned j = 1; j <= params.group_count(); ++j) {
        TagRange reach{params.tag_floor(j), params.tag_ceiling(j)};
        out << std::left << std::setw(5) << j << std::setw(8)
            << params.buffer(j) << std::setw(16)
            << format_range(params.tag_set(j)) << std::setw(16)
            << format_range(reach) << params.occupancy_bound(j) << "\n";
    }
    return out.str();
}

}  // namespace opq

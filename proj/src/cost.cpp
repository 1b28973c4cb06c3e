#include "opq/cost.hpp"

#include <stdexcept>
#include <string>

namespace opq {

namespace {

void check_group_index(unsigned j, unsigned ell) {
    if (ell == 0) {
        throw std::invalid_argument("ell must be >= 1");
    }
    if (j == 0 || j > 2 * ell - 1) {
        throw std::out_of_range("group index " + std::to_string(j) +
                                " outside [1, " + std::to_string(2 * ell - 1) +
                                "]");
    }
}

// FDL counts stay quadratic in ell; keep B* (exponential bits) bounded too.
constexpr unsigned kMaxEll = 10'000'000;

void check_cost_ell(unsigned ell) {
    if (ell < 2) {
        throw std::invalid_argument("total cost is defined for ell >= 2");
    }
    if (ell > kMaxEll) {
        throw std::invalid_argument("ell too large for cost evaluation");
    }
}

}  // namespace

CostReport mux_construction_cost(unsigned n, unsigned k) {
    if (n < 2) {
        throw std::invalid_argument("multiplexer needs n >= 2 inputs");
    }
    if (k < 1) {
        throw std::invalid_argument("buffer exponent k must be >= 1");
    }
    CostReport r;
    r.switch_size = std::uint64_t{n - 1} * k + n;
    r.fdl_count = std::uint64_t{n - 1} * k;
    r.buffer = boost::multiprecision::pow(BigInt(n), k) - 1;
    return r;
}

unsigned relaxed_buffer_exponent(unsigned j, unsigned ell) {
    check_group_index(j, ell);
    if (j == 1 || j == 2 * ell - 1) {
        return 1;  // B' = 3 = 4^1 - 1
    }
    const unsigned m = (j <= ell) ? j - 1 : 2 * ell - j - 1;
    return (m + 1) / 2;  // ceil(m/2)
}

BigInt relaxed_buffer(unsigned j, unsigned ell) {
    // 4^k - 1 = 2^(2k) - 1
    return (BigInt(1) << (2 * relaxed_buffer_exponent(j, ell))) - 1;
}

BigInt group_buffer(unsigned j, unsigned ell) {
    check_group_index(j, ell);
    if (j == 1 || j == 2 * ell - 1) {
        return 1;
    }
    const unsigned e = (j <= ell) ? j - 2 : 2 * ell - j - 2;
    return BigInt(1) << e;
}

BigInt total_buffer(unsigned ell) {
    if (ell == 0) {
        throw std::invalid_argument("ell must be >= 1");
    }
    return (BigInt(3) << (ell - 1)) - 2;
}

CostReport total_cost(unsigned ell) {
    check_cost_ell(ell);
    const std::uint64_t l = ell;
    CostReport r;
    r.fdl_count = 9 * (l * l - l) / 2 + 18;
    r.switch_size = (9 * l * l + 39 * l) / 2 + 8;
    r.buffer = total_buffer(ell);
    return r;
}

CostReport total_cost_by_sum(unsigned ell) {
    check_cost_ell(ell);
    CostReport total;
    for (unsigned j = 1; j <= 2 * ell - 1; ++j) {
        const CostReport mux =
            mux_construction_cost(4, relaxed_buffer_exponent(j, ell));
        total.fdl_count += 3 * mux.fdl_count;
        total.switch_size += 3 * mux.switch_size;
    }
    total.switch_size += 2;  // external arrival + departure/loss side
    total.buffer = total_buffer(ell);
    return total;
}

std::pair<unsigned, CostReport> max_ell_for_budget(std::uint64_t budget) {
    if (budget < 27) {
        throw std::invalid_argument("budget below the ell = 2 cost of 27 FDLs");
    }
    if (budget > 1'000'000'000'000ull) {
        throw std::invalid_argument("budget too large");
    }
    unsigned best = 2;
    for (unsigned ell = 3;; ++ell) {
        const unsigned __int128 l = ell;
        const unsigned __int128 fdls = 9 * (l * l - l) / 2 + 18;
        if (fdls > budget) {
            break;
        }
        best = ell;
    }
    return {best, total_cost(best)};
}

}  // namespace opq

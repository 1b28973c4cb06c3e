#pragma once

#include <cstdint>
#include <utility>

#include <boost/multiprecision/cpp_int.hpp>

namespace opq {

using BigInt = boost::multiprecision::cpp_int;

// Bill of materials of an SDL element: one square crossbar switch plus
// fdl_count fiber delay lines realizing `buffer` packets of storage.
struct CostReport {
    std::uint64_t switch_size = 0;
    std::uint64_t fdl_count = 0;
    BigInt buffer = 0;
};

// Cost of an n-to-1 delayed-loss multiplexer with buffer n^k - 1:
// ((n-1)k + n)-square crossbar and (n-1)k FDLs. n >= 2, k >= 1.
CostReport mux_construction_cost(unsigned n, unsigned k);

// Exponent k of the relaxed per-multiplexer buffer of group j: B'_j = 4^k - 1.
unsigned relaxed_buffer_exponent(unsigned j, unsigned ell);

// Relaxed buffer B'_j (of the form 4^k - 1, always >= B_j), which makes every
// multiplexer realizable by mux_construction_cost with n = 4.
BigInt relaxed_buffer(unsigned j, unsigned ell);

// B_j in unbounded arithmetic (same formula as QueueParams::buffer without
// the 64-bit ell cap).
BigInt group_buffer(unsigned j, unsigned ell);

// B* = 3 * 2^(ell-1) - 2 in unbounded arithmetic.
BigInt total_buffer(unsigned ell);

// Total cost of the construction with relaxed buffers, all multiplexer
// switches merged into one crossbar: closed forms
// switch = (9*ell^2 + 39*ell)/2 + 8, FDLs = 9*(ell^2 - ell)/2 + 18,
// buffer = B*. Requires ell >= 2.
CostReport total_cost(unsigned ell);

// The same totals evaluated as the sum of per-multiplexer costs (three
// multiplexers per group, switch sizes summed plus 2 for the external
// arrival/departure links). Independent route for cross-checking.
CostReport total_cost_by_sum(unsigned ell);

// Largest ell whose FDL count fits the budget, with its cost report.
// budget must be >= 27 (the ell = 2 cost) and <= 10^12.
std::pair<unsigned, CostReport> max_ell_for_budget(std::uint64_t budget);

}  // namespace opq

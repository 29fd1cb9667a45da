#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

#include "ptc/common.hpp"
#include "ptc/modem.hpp"
#include "ptc/permmap.hpp"

namespace ptc {

/// M x M assignment costs; +infinity marks a forbidden cell.
struct CostMatrix {
    Square<double> cells;
    int M() const { return cells.dim(); }
};

/// One solution of the assignment problem: perm[i] is the 0-based column
/// assigned to row i, cost the sum of the selected cells.
struct Assignment {
    std::vector<int> perm;
    double cost = 0.0;
};

/// The permutation codeword selected by an assignment: symbol at time slot j
/// is the 1-based row assigned to column j.
Codeword assignment_codeword(const Assignment& a);

/// Minimum-cost assignment via shortest augmenting paths, O(M^3).
/// Deterministic: internal tie choices are fixed by lowest-index scanning.
/// Throws InfeasibleError when no finite-cost perfect assignment exists.
/// `ops` (here and below) accumulates elementary inner-loop operations.
Assignment hungarian(const CostMatrix& c, std::uint64_t* ops = nullptr);

/// Lazy ranked enumeration of assignments by non-decreasing cost, partitioning
/// each incumbent into fixed-prefix / forbidden-pair subproblems. Candidate
/// nodes pop by (lower-bound cost, insertion order).
class MurtyRanker {
  public:
    explicit MurtyRanker(const CostMatrix& c, std::uint64_t* ops = nullptr);
    ~MurtyRanker();
    MurtyRanker(MurtyRanker&&) noexcept;
    MurtyRanker& operator=(MurtyRanker&&) noexcept;

    /// Next-best assignment, or nullopt once all M! are exhausted.
    std::optional<Assignment> next();

  private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

/// First k assignments of the ranking (all of them when k > M!).
std::vector<Assignment> murty_kbest(const CostMatrix& c, int k, std::uint64_t* ops = nullptr);

/// Level-pruned tree search: rows are assigned in order; at each level every
/// unused column is scored by committed cost plus the greedy completion bound
/// (per-remaining-row minima over unused columns) and only the minimum child
/// survives. No backtracking, so the result is feasible but not always
/// optimal. Ties break to the lowest column index. Requires all cells finite.
Assignment branch_and_bound(const CostMatrix& c, std::uint64_t* ops = nullptr);

/// Exhaustive minimum over all M! permutations (M <= 8, else RefusalError).
Assignment brute_force_best(const CostMatrix& c);

/// Exhaustive minimum restricted to the codebook's codewords: the optimal
/// decision. Ties go to the lowest row index.
struct BookDecision {
    Assignment assignment;
    int row = 0;  // codebook row of the winning codeword
};
BookDecision brute_force_best(const CostMatrix& c, const Codebook& book, std::uint64_t* ops = nullptr);

}  // namespace ptc

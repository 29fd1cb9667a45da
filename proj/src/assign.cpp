#include "ptc/assign.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <queue>

namespace ptc {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

/// Finite stand-in for forbidden cells, large enough that any matching using
/// one costs more than every fully-finite matching.
double forbidden_sentinel(const CostMatrix& c) {
    double max_abs = 0.0;
    const int m = c.M();
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
            if (std::isfinite(c.cells(i, j))) max_abs = std::max(max_abs, std::abs(c.cells(i, j)));
    return (2.0 * m * max_abs + 1.0) * 4.0;
}

/// Jonker-Volgenant style shortest augmenting path solver on a dense matrix.
/// Returns row -> column, or an empty vector when only forbidden-cell
/// completions exist.
std::vector<int> solve_lap(const CostMatrix& c, double big, double& cost_out, std::uint64_t* ops) {
    const int m = c.M();
    auto cell = [&](int i, int j) {
        const double v = c.cells(i, j);
        return std::isfinite(v) ? v : big;
    };

    std::vector<double> u(m + 1, 0.0), v(m + 1, 0.0);
    std::vector<int> col_row(m + 1, 0);  // col -> assigned row, 1-based; 0 = free
    std::vector<int> way(m + 1, 0);
    std::uint64_t count = 0;

    for (int i = 1; i <= m; ++i) {
        col_row[0] = i;
        int j0 = 0;
        std::vector<double> minv(m + 1, kInf);
        std::vector<char> used(m + 1, 0);
        do {
            used[j0] = 1;
            const int i0 = col_row[j0];
            int j1 = 0;
            double delta = kInf;
            for (int j = 1; j <= m; ++j) {
                if (used[j]) continue;
                ++count;
                const double cur = cell(i0 - 1, j - 1) - u[i0] - v[j];
                if (cur < minv[j]) {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if (minv[j] < delta) {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for (int j = 0; j <= m; ++j) {
                if (used[j]) {
                    u[col_row[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
        } while (col_row[j0] != 0);
        do {
            const int j1 = way[j0];
            col_row[j0] = col_row[j1];
            j0 = j1;
        } while (j0);
    }
    if (ops) *ops += count;

    std::vector<int> row_col(m, -1);
    for (int j = 1; j <= m; ++j) row_col[col_row[j] - 1] = j - 1;
    double cost = 0.0;
    for (int i = 0; i < m; ++i) {
        if (!std::isfinite(c.cells(i, row_col[i]))) return {};
        cost += c.cells(i, row_col[i]);
    }
    cost_out = cost;
    return row_col;
}

void check_feasible_shape(const CostMatrix& c) {
    const int m = c.M();
    if (m == 0) throw InputError("empty cost matrix");
    for (int i = 0; i < m; ++i) {
        bool row_ok = false, col_ok = false;
        for (int j = 0; j < m; ++j) {
            row_ok |= std::isfinite(c.cells(i, j));
            col_ok |= std::isfinite(c.cells(j, i));
        }
        if (!row_ok) throw InfeasibleError("row " + std::to_string(i + 1) + " has no finite cell");
        if (!col_ok) throw InfeasibleError("column " + std::to_string(i + 1) + " has no finite cell");
    }
}

}  // namespace

Codeword assignment_codeword(const Assignment& a) {
    Codeword c(a.perm.size());
    for (size_t i = 0; i < a.perm.size(); ++i) c[a.perm[i]] = static_cast<int>(i) + 1;
    return c;
}

Assignment hungarian(const CostMatrix& c, std::uint64_t* ops) {
    check_feasible_shape(c);
    double cost = 0.0;
    std::vector<int> perm = solve_lap(c, forbidden_sentinel(c), cost, ops);
    if (perm.empty()) throw InfeasibleError("no finite-cost perfect assignment exists");
    return {std::move(perm), cost};
}

// ---------------------------------------------------------------------------
// Murty ranking
// ---------------------------------------------------------------------------

struct MurtyRanker::Impl {
    struct Node {
        std::vector<std::pair<int, int>> forced;     // (row, col) pairs removed from play
        std::vector<std::pair<int, int>> forbidden;  // (row, col) pairs barred with infinity
        Assignment solution;
        std::uint64_t seq = 0;  // insertion order, tie-break key
    };

    struct NodeOrder {
        bool operator()(const Node& a, const Node& b) const {
            if (a.solution.cost != b.solution.cost) return a.solution.cost > b.solution.cost;
            return a.seq > b.seq;
        }
    };

    CostMatrix base;
    double big = 0.0;
    std::priority_queue<Node, std::vector<Node>, NodeOrder> queue;
    std::uint64_t next_seq = 0;
    std::uint64_t* ops = nullptr;

    std::optional<Assignment> solve_restricted(const std::vector<std::pair<int, int>>& forced,
                                               const std::vector<std::pair<int, int>>& forbidden) {
        CostMatrix sub = base;
        for (const auto& [row, col] : forbidden) sub.cells(row, col) = kInf;
        for (const auto& [row, col] : forced) {
            for (int j = 0; j < sub.M(); ++j)
                if (j != col) sub.cells(row, j) = kInf;
        }
        double cost = 0.0;
        std::vector<int> perm = solve_lap(sub, big, cost, ops);
        if (perm.empty()) return std::nullopt;
        // Report the true cost against the base matrix.
        double true_cost = 0.0;
        for (int i = 0; i < base.M(); ++i) true_cost += base.cells(i, perm[i]);
        return Assignment{std::move(perm), true_cost};
    }
};

MurtyRanker::MurtyRanker(const CostMatrix& c, std::uint64_t* ops) : impl_(std::make_unique<Impl>()) {
    check_feasible_shape(c);
    impl_->base = c;
    impl_->big = forbidden_sentinel(c);
    impl_->ops = ops;
    auto root = impl_->solve_restricted({}, {});
    if (!root) throw InfeasibleError("no finite-cost perfect assignment exists");
    impl_->queue.push({{}, {}, std::move(*root), impl_->next_seq++});
}

MurtyRanker::~MurtyRanker() = default;
MurtyRanker::MurtyRanker(MurtyRanker&&) noexcept = default;
MurtyRanker& MurtyRanker::operator=(MurtyRanker&&) noexcept = default;

std::optional<Assignment> MurtyRanker::next() {
    if (impl_->queue.empty()) return std::nullopt;
    Impl::Node node = impl_->queue.top();
    impl_->queue.pop();

    // Partition the popped node around its incumbent: child g fixes the first
    // g free-row pairs and bars the next one, inheriting the node's own
    // constraints. The child spaces are disjoint and exclude the incumbent.
    std::vector<int> free_rows;
    std::vector<char> is_forced(node.solution.perm.size(), 0);
    for (const auto& [row, col] : node.forced) is_forced[row] = 1;
    for (size_t i = 0; i < node.solution.perm.size(); ++i)
        if (!is_forced[i]) free_rows.push_back(static_cast<int>(i));

    auto forced = node.forced;
    auto forbidden = node.forbidden;
    for (size_t g = 0; g < free_rows.size(); ++g) {
        const int row = free_rows[g];
        const int col = node.solution.perm[row];
        forbidden.push_back({row, col});
        if (auto child = impl_->solve_restricted(forced, forbidden)) {
            impl_->queue.push({forced, forbidden, std::move(*child), impl_->next_seq++});
        }
        forbidden.pop_back();
        forced.push_back({row, col});
    }
    return std::move(node.solution);
}

std::vector<Assignment> murty_kbest(const CostMatrix& c, int k, std::uint64_t* ops) {
    if (k < 1) throw InputError("k must be >= 1");
    MurtyRanker ranker(c, ops);
    std::vector<Assignment> ranked;
    ranked.reserve(k);
    for (int g = 0; g < k; ++g) {
        auto a = ranker.next();
        if (!a) break;  // k exceeded M!; all assignments returned
        ranked.push_back(std::move(*a));
    }
    return ranked;
}

// ---------------------------------------------------------------------------
// Branch and bound (single-survivor level pruning)
// ---------------------------------------------------------------------------

Assignment branch_and_bound(const CostMatrix& c, std::uint64_t* ops) {
    const int m = c.M();
    if (m == 0) throw InputError("empty cost matrix");
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
            if (!std::isfinite(c.cells(i, j))) throw InputError("branch and bound requires all cells finite");

    std::vector<char> used(m, 0);
    Assignment result;
    result.perm.assign(m, -1);
    std::uint64_t count = 0;
    double committed = 0.0;

    // Per level: each remaining row's smallest and second-smallest cell over
    // the unused columns, so a candidate's greedy completion bound is the
    // total of row minima, swapping in the runner-up where the candidate
    // column was a row's minimizer. O(M^2) per level.
    std::vector<double> delta_if_taken(m);
    for (int row = 0; row < m; ++row) {
        std::fill(delta_if_taken.begin(), delta_if_taken.end(), 0.0);
        double completion = 0.0;
        for (int i = row + 1; i < m; ++i) {
            double min1 = kInf, min2 = kInf;
            int arg1 = -1;
            for (int j = 0; j < m; ++j) {
                if (used[j]) continue;
                ++count;
                const double v = c.cells(i, j);
                if (v < min1) {
                    min2 = min1;
                    min1 = v;
                    arg1 = j;
                } else if (v < min2) {
                    min2 = v;
                }
            }
            completion += min1;
            if (arg1 >= 0) delta_if_taken[arg1] += min2 - min1;
        }

        int best_col = -1;
        double best_bound = kInf;
        for (int t = 0; t < m; ++t) {
            if (used[t]) continue;
            ++count;
            const double bound = committed + c.cells(row, t) + completion + delta_if_taken[t];
            if (bound < best_bound) {
                best_bound = bound;
                best_col = t;
            }
        }
        used[best_col] = 1;
        result.perm[row] = best_col;
        committed += c.cells(row, best_col);
    }
    if (ops) *ops += count;
    result.cost = committed;
    return result;
}

// ---------------------------------------------------------------------------
// Brute-force references
// ---------------------------------------------------------------------------

Assignment brute_force_best(const CostMatrix& c) {
    const int m = c.M();
    if (m > 8) throw RefusalError("brute force over M! is limited to M <= 8, got M=" + std::to_string(m));
    if (m == 0) throw InputError("empty cost matrix");
    std::vector<int> perm(m);
    std::iota(perm.begin(), perm.end(), 0);
    Assignment best;
    best.cost = kInf;
    do {
        double cost = 0.0;
        for (int i = 0; i < m; ++i) cost += c.cells(i, perm[i]);
        if (cost < best.cost) {
            best.cost = cost;
            best.perm = perm;
        }
    } while (std::next_permutation(perm.begin(), perm.end()));
    if (!std::isfinite(best.cost)) throw InfeasibleError("no finite-cost perfect assignment exists");
    return best;
}

BookDecision brute_force_best(const CostMatrix& c, const Codebook& book, std::uint64_t* ops) {
    const int m = c.M();
    if (book.M() != m) throw InputError("codebook M does not match cost matrix");
    BookDecision best;
    best.assignment.cost = kInf;
    best.row = -1;
    for (int q = 0; q < book.size(); ++q) {
        const Codeword& cw = book.row(q).codeword;
        double cost = 0.0;
        for (int j = 0; j < m; ++j) cost += c.cells(cw[j] - 1, j);
        if (cost < best.assignment.cost) {
            best.assignment.cost = cost;
            best.row = q;
        }
    }
    if (ops) *ops += static_cast<std::uint64_t>(book.size()) * m;
    if (!std::isfinite(best.assignment.cost)) throw InfeasibleError("every codebook codeword crosses a forbidden cell");
    const Codeword& cw = book.row(best.row).codeword;
    best.assignment.perm.assign(m, -1);
    for (int j = 0; j < m; ++j) best.assignment.perm[cw[j] - 1] = j;
    return best;
}

}  // namespace ptc

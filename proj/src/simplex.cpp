#include "sas/simplex.hpp"

#include "sas/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace sas {

namespace {

class Tableau {
public:
    Tableau(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), data_((rows + 1) * (cols + 1), 0.0), basis_(rows, 0) {}

    double& at(std::size_t r, std::size_t c) { return data_[r * (cols_ + 1) + c]; }
    double at(std::size_t r, std::size_t c) const { return data_[r * (cols_ + 1) + c]; }
    double& rhs(std::size_t r) { return at(r, cols_); }
    double rhs(std::size_t r) const { return at(r, cols_); }
    /// Reduced-cost row lives below the constraint rows.
    double& cost(std::size_t c) { return at(rows_, c); }
    double cost(std::size_t c) const { return at(rows_, c); }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    std::vector<std::size_t>& basis() { return basis_; }

    void pivot(std::size_t pr, std::size_t pc) {
        const double inv = 1.0 / at(pr, pc);
        for (std::size_t c = 0; c <= cols_; ++c) {
            at(pr, c) *= inv;
        }
        at(pr, pc) = 1.0;
        for (std::size_t r = 0; r <= rows_; ++r) {
            if (r == pr) {
                continue;
            }
            const double factor = at(r, pc);
            if (factor == 0.0) {
                continue;
            }
            for (std::size_t c = 0; c <= cols_; ++c) {
                at(r, c) -= factor * at(pr, c);
            }
            at(r, pc) = 0.0;
        }
        basis_[pr] = pc;
    }

    /// Runs Bland's rule over columns [0, allowed) until optimal. Returns pivots taken.
    std::size_t optimize(std::size_t allowed, double tol, std::size_t max_pivots) {
        std::size_t pivots = 0;
        while (true) {
            std::size_t entering = allowed;
            for (std::size_t c = 0; c < allowed; ++c) {
                if (cost(c) < -tol) {
                    entering = c;
                    break;
                }
            }
            if (entering == allowed) {
                return pivots;
            }
            std::size_t leaving = rows_;
            double best_ratio = std::numeric_limits<double>::infinity();
            for (std::size_t r = 0; r < rows_; ++r) {
                const double a = at(r, entering);
                if (a <= tol) {
                    continue;
                }
                const double ratio = rhs(r) / a;
                if (ratio < best_ratio - tol ||
                    (std::abs(ratio - best_ratio) <= tol && basis_[r] < basis_[leaving])) {
                    best_ratio = std::min(ratio, best_ratio);
                    leaving = r;
                }
            }
            if (leaving == rows_) {
                throw Error(ErrorCode::Unbounded, "linear program is unbounded");
            }
            pivot(leaving, entering);
            if (++pivots > max_pivots) {
                throw Error(ErrorCode::Cycling, "simplex exceeded the pivot limit");
            }
        }
    }

private:
    std::size_t rows_;
    std::size_t cols_;
    std::vector<double> data_;
    std::vector<std::size_t> basis_;
};

} // namespace

SimplexSolution simplex_solve(const LinearProgram& lp, const SimplexOptions& options) {
    const std::size_t n = lp.n_vars;
    if (lp.objective.size() != n || (!lp.free_vars.empty() && lp.free_vars.size() != n)) {
        throw Error(ErrorCode::DimensionMismatch, "objective or free-variable mask has the wrong size");
    }
    for (const auto& row : lp.rows) {
        if (row.coefficients.size() != n) {
            throw Error(ErrorCode::DimensionMismatch, "constraint row has the wrong size");
        }
    }
    const double tol = options.tolerance;

    // Column layout: structural parts, then slack/surplus, then artificials.
    std::vector<std::size_t> pos_col(n), neg_col(n, SIZE_MAX);
    std::size_t cols = 0;
    for (std::size_t j = 0; j < n; ++j) {
        pos_col[j] = cols++;
        if (!lp.free_vars.empty() && lp.free_vars[j]) {
            neg_col[j] = cols++;
        }
    }
    const std::size_t m = lp.rows.size();
    std::vector<RowSense> sense(m);
    std::vector<double> sign(m, 1.0);
    std::size_t n_slack = 0;
    std::size_t n_artificial = 0;
    for (std::size_t i = 0; i < m; ++i) {
        sense[i] = lp.rows[i].sense;
        if (lp.rows[i].rhs < 0.0) {
            sign[i] = -1.0;
            if (sense[i] == RowSense::LessEqual) {
                sense[i] = RowSense::GreaterEqual;
            } else if (sense[i] == RowSense::GreaterEqual) {
                sense[i] = RowSense::LessEqual;
            }
        }
        n_slack += sense[i] != RowSense::Equal ? 1 : 0;
        n_artificial += sense[i] != RowSense::LessEqual ? 1 : 0;
    }
    const std::size_t structural = cols;
    const std::size_t first_artificial = structural + n_slack;
    Tableau tab(m, first_artificial + n_artificial);

    std::size_t next_slack = structural;
    std::size_t next_artificial = first_artificial;
    for (std::size_t i = 0; i < m; ++i) {
        const auto& row = lp.rows[i];
        for (std::size_t j = 0; j < n; ++j) {
            tab.at(i, pos_col[j]) = sign[i] * row.coefficients[j];
            if (neg_col[j] != SIZE_MAX) {
                tab.at(i, neg_col[j]) = -sign[i] * row.coefficients[j];
            }
        }
        tab.rhs(i) = sign[i] * row.rhs;
        if (sense[i] == RowSense::LessEqual) {
            tab.at(i, next_slack) = 1.0;
            tab.basis()[i] = next_slack++;
        } else {
            if (sense[i] == RowSense::GreaterEqual) {
                tab.at(i, next_slack++) = -1.0;
            }
            tab.at(i, next_artificial) = 1.0;
            tab.basis()[i] = next_artificial++;
        }
    }

    SimplexSolution solution;

    // Phase 1: minimize the sum of artificials.
    if (n_artificial > 0) {
        for (std::size_t i = 0; i < m; ++i) {
            if (tab.basis()[i] >= first_artificial) {
                for (std::size_t c = 0; c <= tab.cols(); ++c) {
                    if (c < first_artificial || c == tab.cols()) {
                        tab.cost(c) -= tab.at(i, c);
                    }
                }
            }
        }
        solution.pivots += tab.optimize(tab.cols(), tol, options.max_pivots);
        double scale = 1.0;
        for (const auto& row : lp.rows) {
            scale = std::max(scale, std::abs(row.rhs));
        }
        if (-tab.cost(tab.cols()) > 1e-7 * scale) {
            throw Error(ErrorCode::Infeasible, "linear program is infeasible");
        }
        // Drive remaining (zero-valued) artificials out of the basis where possible.
        for (std::size_t i = 0; i < m; ++i) {
            if (tab.basis()[i] < first_artificial) {
                continue;
            }
            std::size_t best = first_artificial;
            for (std::size_t c = 0; c < first_artificial; ++c) {
                if (std::abs(tab.at(i, c)) > tol &&
                    (best == first_artificial || std::abs(tab.at(i, c)) > std::abs(tab.at(i, best)))) {
                    best = c;
                }
            }
            if (best != first_artificial) {
                tab.pivot(i, best);
                ++solution.pivots;
            }
        }
    }

    // Phase 2: original objective over the structural and slack columns.
    for (std::size_t c = 0; c <= tab.cols(); ++c) {
        tab.cost(c) = 0.0;
    }
    for (std::size_t j = 0; j < n; ++j) {
        tab.cost(pos_col[j]) = lp.objective[j];
        if (neg_col[j] != SIZE_MAX) {
            tab.cost(neg_col[j]) = -lp.objective[j];
        }
    }
    for (std::size_t i = 0; i < m; ++i) {
        const double cb = tab.cost(tab.basis()[i]);
        if (cb == 0.0) {
            continue;
        }
        for (std::size_t c = 0; c <= tab.cols(); ++c) {
            tab.cost(c) -= cb * tab.at(i, c);
        }
    }
    solution.pivots += tab.optimize(first_artificial, tol, options.max_pivots);

    std::vector<double> column_value(tab.cols(), 0.0);
    for (std::size_t i = 0; i < m; ++i) {
        column_value[tab.basis()[i]] = tab.rhs(i);
    }
    solution.x.assign(n, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
        solution.x[j] = column_value[pos_col[j]] - (neg_col[j] != SIZE_MAX ? column_value[neg_col[j]] : 0.0);
        solution.objective += lp.objective[j] * solution.x[j];
    }
    for (const auto& row : lp.rows) {
        double lhs = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            lhs += row.coefficients[j] * solution.x[j];
        }
        double violation = 0.0;
        switch (row.sense) {
        case RowSense::LessEqual: violation = lhs - row.rhs; break;
        case RowSense::GreaterEqual: violation = row.rhs - lhs; break;
        case RowSense::Equal: violation = std::abs(lhs - row.rhs); break;
        }
        solution.feasibility_residual = std::max(solution.feasibility_residual, violation);
    }
    return solution;
}

} // namespace sas

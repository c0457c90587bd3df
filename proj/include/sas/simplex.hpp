#pragma once

#include <cstddef>
#include <vector>

namespace sas {

enum class RowSense { LessEqual, GreaterEqual, Equal };

struct LpRow {
    std::vector<double> coefficients;
    RowSense sense = RowSense::LessEqual;
    double rhs = 0.0;
};

/// minimize objective . x subject to rows; variables are non-negative unless marked free.
struct LinearProgram {
    std::size_t n_vars = 0;
    std::vector<double> objective;
    std::vector<LpRow> rows;
    std::vector<bool> free_vars;  ///< empty means all non-negative
};

struct SimplexOptions {
    double tolerance = 1e-9;
    std::size_t max_pivots = 200'000;
};

struct SimplexSolution {
    std::vector<double> x;
    double objective = 0.0;
    std::size_t pivots = 0;
    double feasibility_residual = 0.0;  ///< largest row violation at x
};

/**
 * Dense two-phase tableau simplex with Bland's smallest-index rule.
 *
 * Free variables are split into positive and negative parts. Throws
 * Error(Infeasible), Error(Unbounded), or Error(Cycling) when the pivot limit is hit.
 */
SimplexSolution simplex_solve(const LinearProgram& lp, const SimplexOptions& options = {});

} // namespace sas

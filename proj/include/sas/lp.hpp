#pragma once

#include "sas/instance.hpp"
#include "sas/simplex.hpp"
#include "sas/types.hpp"

#include <optional>
#include <span>
#include <vector>

namespace sas {

/**
 * v_s >= Q^v_s(sigma) for one state and one action ranking.
 *
 * Q^v_s(sigma) is affine in v: constant + sum_t coefficients[t] v_t, where each
 * listed action contributes its execution probability times r + discount * p . v.
 */
struct DlConstraint {
    StateIndex state = 0;
    std::vector<ActionIndex> sigma;
    std::vector<double> coefficients;
    double constant = 0.0;

    /// Q^v_s(sigma) at v.
    double q_value(std::span<const double> values) const;

    /// The constraint as a row of v_s - sum coefficients . v >= constant.
    LpRow row() const;
};

DlConstraint make_dl_constraint(const Instance& instance, StateIndex s, std::vector<ActionIndex> sigma);

struct Separation {
    std::vector<ActionIndex> sigma;  ///< actions sorted by Q^v(s, .) descending, ties by index
    double violation = 0.0;          ///< Q^v_s(sigma) - v_s
};

/// Most violated ranking constraint at s for the candidate v (greedy sort by Q-value).
Separation separation_oracle(const Instance& instance, std::span<const double> values, StateIndex s);

struct LpOptions {
    /// Positive state weights; uniform 1/n when empty.
    std::vector<double> alpha;
    double tol = 1e-8;
    /// Constraint-generation rounds; 10 n m when zero.
    std::size_t max_rounds = 0;
    SimplexOptions simplex;
};

struct LpResult {
    ValueFunction values;
    DecisionListPolicy policy;
    std::size_t constraint_count = 0;
    std::size_t rounds = 0;
    std::vector<double> objective_trace;  ///< relaxed objective after each round
    double final_max_violation = 0.0;
};

/**
 * Solves min alpha . v s.t. v_s >= Q^v_s(sigma) for all s and rankings sigma by
 * constraint generation, starting from the identity ranking at every state.
 *
 * PDA and Explicit models only. Throws Error(MaxRoundsExceeded) if violated
 * constraints remain after max_rounds.
 */
LpResult solve_lp(const Instance& instance, const LpOptions& options = {});

} // namespace sas

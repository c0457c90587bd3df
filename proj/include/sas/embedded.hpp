#pragma once

#include "sas/instance.hpp"
#include "sas/types.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace sas {

/// Largest base action count build_embedded accepts.
inline constexpr std::size_t kMaxEmbeddedActions = 14;

/// Largest number of stored transition entries build_embedded accepts.
inline constexpr std::size_t kMaxEmbeddedEntries = 50'000'000;

struct EmbeddedState {
    StateIndex base = 0;
    ActionMask available = 0;
    double probability = 0.0;  ///< P_base(available), always positive
};

struct EmbeddedTransition {
    std::size_t target = 0;
    double probability = 0.0;
};

/// One feasible (embedded state, action) pair; its successor distribution is entries[begin, end).
struct EmbeddedRow {
    ActionIndex action = 0;
    double reward = 0.0;
    std::size_t begin = 0;
    std::size_t end = 0;
};

/**
 * Standard MDP over pairs (s, A) of a base state and a realized available set.
 *
 * Only pairs with P_s(A) > 0 are materialized. Embedded states of base state s
 * occupy the contiguous range [state_begin[s], state_begin[s + 1]).
 */
struct EmbeddedMdp {
    std::size_t n_base_states = 0;
    std::size_t n_actions = 0;
    double discount = 0.0;
    std::vector<EmbeddedState> states;
    std::vector<std::size_t> state_begin;
    std::vector<std::size_t> row_begin;  ///< rows of embedded state e are [row_begin[e], row_begin[e+1])
    std::vector<EmbeddedRow> rows;
    std::vector<EmbeddedTransition> entries;

    std::size_t size() const { return states.size(); }
    std::span<const EmbeddedRow> rows_of(std::size_t e) const {
        return {rows.data() + row_begin[e], row_begin[e + 1] - row_begin[e]};
    }
    std::span<const EmbeddedTransition> successors(const EmbeddedRow& row) const {
        return {entries.data() + row.begin, row.end - row.begin};
    }
    /// Index of (s, A), or size() if that pair has zero probability.
    std::size_t find(StateIndex s, ActionMask available) const;
};

/**
 * Builds p(s'A' | sA, k) = p(s'|s,k) P_s'(A') and r(sA, k) = r(s, k) for k in A.
 *
 * Throws UnsupportedModel for a sampler and TooLarge when m > 14 or the
 * transition table would exceed kMaxEmbeddedEntries.
 */
EmbeddedMdp build_embedded(const Instance& instance);

struct EmbeddedSolution {
    ValueFunction values;             ///< indexed by embedded state
    std::vector<ActionIndex> policy;  ///< greedy action per embedded state, always in its set
    std::size_t iterations = 0;
    double residual = 0.0;
};

/// One Bellman backup T*_e V in the embedded space.
ValueFunction embedded_bellman(const EmbeddedMdp& emb, std::span<const double> values);

/// Value iteration until ||V - T V|| <= eps (1 - discount) / (2 discount).
EmbeddedSolution solve_embedded_vi(const EmbeddedMdp& emb, double eps,
                                   std::size_t max_iters = 1'000'000);

/// Exact value of a deterministic embedded policy, by a dense linear solve.
ValueFunction evaluate_embedded_policy(const EmbeddedMdp& emb, std::span<const ActionIndex> policy);

/// V_c(s) = sum_A P_s(A) V_e(s, A).
ValueFunction compress_value(const EmbeddedMdp& emb, std::span<const double> embedded_values);

/**
 * Embedded-space policy that is greedy with respect to a compressed value function.
 *
 * At (s, A) it picks argmax_{k in A} r(s,k) + discount * sum p(s'|s,k) V_c(s'),
 * ties to the lowest action index.
 */
class EmbeddedPolicy {
public:
    explicit EmbeddedPolicy(QFunction q) : q_(std::move(q)) {}

    /// Throws Error(EmptySet) when `available` is empty.
    ActionIndex operator()(StateIndex s, ActionMask available) const;

    /// Backed-up value of the chosen action.
    double value(StateIndex s, ActionMask available) const;

    const QFunction& q() const { return q_; }

private:
    QFunction q_;
};

EmbeddedPolicy extract_embedded_policy(const Instance& instance, std::span<const double> compressed_values);

} // namespace sas

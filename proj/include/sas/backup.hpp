#pragma once

#include "sas/instance.hpp"
#include "sas/types.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace sas {

/// Q(s,k) = r(s,k) + discount * sum_s' p(s'|s,k) V(s').
QFunction q_values(const BaseMdp& mdp, std::span<const double> values);

/**
 * Expected Q-value of executing `order` at s under a product distribution:
 * sum_i [prod_{j<i} (1 - rho_(j))] rho_(i) q[order_i], summed over every position.
 */
double pda_list_value(const PdaAvailability& pda, StateIndex s, std::span<const ActionIndex> order,
                      std::span<const double> q);

/// Same expectation by direct summation over the listed subsets.
double explicit_list_value(const ExplicitAvailability& table, StateIndex s,
                           std::span<const ActionIndex> order, std::span<const double> q);

/// Exact expectation for a PDA or Explicit instance; UnsupportedModel for a sampler.
double list_value(const Instance& instance, StateIndex s, std::span<const ActionIndex> order,
                  std::span<const double> q);

/// Probability that each base action is the one executed by `order` at s.
std::vector<double> selection_probabilities(const Instance& instance, StateIndex s,
                                            std::span<const ActionIndex> order);

/// Policy backup T^mu V for a PDA instance without subset enumeration.
ValueFunction dl_backup_pda(const Instance& instance, const DecisionListPolicy& policy,
                            std::span<const double> values);

/// Policy backup T^mu V by direct expectation over an explicit subset table.
ValueFunction dl_backup_explicit(const Instance& instance, const DecisionListPolicy& policy,
                                 std::span<const double> values);

/**
 * Monte-Carlo policy backup for a sampler instance from `n_samples` draws per state.
 *
 * Draws come from the sampler's (state, stream) generators, so the result is a
 * deterministic function of the sampler seed and `stream`.
 */
ValueFunction dl_backup_ads(const Instance& instance, const DecisionListPolicy& policy,
                            std::span<const double> values, std::size_t n_samples,
                            std::uint64_t stream = 0);

/// dl_backup_pda or dl_backup_explicit depending on the model.
ValueFunction dl_backup(const Instance& instance, const DecisionListPolicy& policy,
                        std::span<const double> values);

/// Markov chain over base states induced by a decision list.
struct PolicyChain {
    std::size_t n_states = 0;
    std::vector<double> transitions;  ///< row-major n x n
    ValueFunction rewards;

    double operator()(StateIndex s, StateIndex t) const { return transitions[s * n_states + t]; }
};

PolicyChain dl_transition_matrix(const Instance& instance, const DecisionListPolicy& policy);

/// Actions sorted by q descending, ties by ascending index.
std::vector<ActionIndex> greedy_order(std::span<const double> q);

DecisionListPolicy greedy_dl(const QFunction& q);

} // namespace sas

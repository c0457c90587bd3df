#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace sas {

using StateIndex = std::size_t;
using ActionIndex = std::size_t;

/// Set of base actions, bit k set iff action k is in the set.
using ActionMask = std::uint64_t;

/// Largest action count representable by an ActionMask.
inline constexpr std::size_t kMaxMaskActions = 62;

inline constexpr ActionMask action_bit(ActionIndex k) { return ActionMask{1} << k; }
inline constexpr bool contains(ActionMask mask, ActionIndex k) { return (mask >> k) & 1U; }
inline constexpr ActionMask full_mask(std::size_t n_actions) {
    return n_actions >= 64 ? ~ActionMask{0} : (ActionMask{1} << n_actions) - 1;
}
inline int subset_size(ActionMask mask) { return std::popcount(mask); }
std::vector<ActionIndex> mask_actions(ActionMask mask);
ActionMask make_mask(std::span<const ActionIndex> actions);

/**
 * Finite base MDP with a common action set of size n_actions at every state.
 *
 * Transitions are stored densely, row (s, k) at offset (s * n_actions + k) * n_states.
 */
struct BaseMdp {
    std::size_t n_states = 0;
    std::size_t n_actions = 0;
    std::vector<double> transitions;
    std::vector<double> rewards;
    double discount = 0.0;

    static BaseMdp zeros(std::size_t n_states, std::size_t n_actions, double discount);

    std::span<const double> transition_row(StateIndex s, ActionIndex k) const {
        return {transitions.data() + (s * n_actions + k) * n_states, n_states};
    }
    std::span<double> transition_row(StateIndex s, ActionIndex k) {
        return {transitions.data() + (s * n_actions + k) * n_states, n_states};
    }
    double reward(StateIndex s, ActionIndex k) const { return rewards[s * n_actions + k]; }
    double& reward(StateIndex s, ActionIndex k) { return rewards[s * n_actions + k]; }

    bool operator==(const BaseMdp&) const = default;
};

using ValueFunction = std::vector<double>;

/// State-action values, row-major n_states x n_actions.
class QFunction {
public:
    QFunction() = default;
    QFunction(std::size_t n_states, std::size_t n_actions, double initial = 0.0)
        : n_states_(n_states), n_actions_(n_actions), values_(n_states * n_actions, initial) {}

    std::size_t n_states() const { return n_states_; }
    std::size_t n_actions() const { return n_actions_; }

    double operator()(StateIndex s, ActionIndex k) const { return values_[s * n_actions_ + k]; }
    double& operator()(StateIndex s, ActionIndex k) { return values_[s * n_actions_ + k]; }

    std::span<const double> row(StateIndex s) const {
        return {values_.data() + s * n_actions_, n_actions_};
    }
    std::span<double> row(StateIndex s) { return {values_.data() + s * n_actions_, n_actions_}; }

    const std::vector<double>& values() const { return values_; }

    bool operator==(const QFunction&) const = default;

private:
    std::size_t n_states_ = 0;
    std::size_t n_actions_ = 0;
    std::vector<double> values_;
};

/**
 * Decision-list policy: one ranking of all base actions per state.
 *
 * At state s with realized available set A the policy executes the first
 * action of order(s) that belongs to A.
 */
class DecisionListPolicy {
public:
    DecisionListPolicy() = default;

    /// Throws Error(BadParameter) unless every list is a permutation of 0..m-1.
    explicit DecisionListPolicy(std::vector<std::vector<ActionIndex>> orders);

    static DecisionListPolicy identity(std::size_t n_states, std::size_t n_actions);

    std::size_t n_states() const { return orders_.size(); }
    std::size_t n_actions() const { return orders_.empty() ? 0 : orders_.front().size(); }

    std::span<const ActionIndex> order(StateIndex s) const { return orders_[s]; }
    const std::vector<std::vector<ActionIndex>>& orders() const { return orders_; }

    /// First listed action contained in `available`; throws Error(EmptySet) if none.
    ActionIndex select(StateIndex s, ActionMask available) const;

    bool operator==(const DecisionListPolicy&) const = default;

private:
    std::vector<std::vector<ActionIndex>> orders_;
};

bool is_permutation_of_range(std::span<const ActionIndex> order);

} // namespace sas

#include "sas/types.hpp"

#include "sas/error.hpp"

#include <numeric>
#include <string>

namespace sas {

std::vector<ActionIndex> mask_actions(ActionMask mask) {
    std::vector<ActionIndex> out;
    out.reserve(static_cast<std::size_t>(std::popcount(mask)));
    while (mask != 0) {
        out.push_back(static_cast<ActionIndex>(std::countr_zero(mask)));
        mask &= mask - 1;
    }
    return out;
}

ActionMask make_mask(std::span<const ActionIndex> actions) {
    ActionMask mask = 0;
    for (ActionIndex k : actions) {
        if (k >= kMaxMaskActions) {
            throw Error(ErrorCode::TooLarge,
                        "action " + std::to_string(k) + " does not fit an action bitmask");
        }
        mask |= action_bit(k);
    }
    return mask;
}

BaseMdp BaseMdp::zeros(std::size_t n_states, std::size_t n_actions, double discount) {
    BaseMdp mdp;
    mdp.n_states = n_states;
    mdp.n_actions = n_actions;
    mdp.transitions.assign(n_states * n_actions * n_states, 0.0);
    mdp.rewards.assign(n_states * n_actions, 0.0);
    mdp.discount = discount;
    return mdp;
}

bool is_permutation_of_range(std::span<const ActionIndex> order) {
    std::vector<bool> seen(order.size(), false);
    for (ActionIndex k : order) {
        if (k >= order.size() || seen[k]) {
            return false;
        }
        seen[k] = true;
    }
    return true;
}

DecisionListPolicy::DecisionListPolicy(std::vector<std::vector<ActionIndex>> orders)
    : orders_(std::move(orders)) {
    for (std::size_t s = 0; s < orders_.size(); ++s) {
        if (orders_[s].size() != orders_.front().size() || !is_permutation_of_range(orders_[s])) {
            throw Error(ErrorCode::BadParameter,
                        "decision list at state " + std::to_string(s) + " is not a permutation");
        }
    }
}

DecisionListPolicy DecisionListPolicy::identity(std::size_t n_states, std::size_t n_actions) {
    std::vector<ActionIndex> order(n_actions);
    std::iota(order.begin(), order.end(), ActionIndex{0});
    return DecisionListPolicy(std::vector<std::vector<ActionIndex>>(n_states, order));
}

ActionIndex DecisionListPolicy::select(StateIndex s, ActionMask available) const {
    for (ActionIndex k : orders_[s]) {
        if (k < 64 && contains(available, k)) {
            return k;
        }
    }
    throw Error(ErrorCode::EmptySet, "no listed action is available at state " + std::to_string(s));
}

} // namespace sas

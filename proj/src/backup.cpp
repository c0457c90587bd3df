#include "sas/backup.hpp"

#include <algorithm>
#include <numeric>
#include <string>

namespace sas {

QFunction q_values(const BaseMdp& mdp, std::span<const double> values) {
    if (values.size() != mdp.n_states) {
        throw Error(ErrorCode::DimensionMismatch, "value function length does not match the MDP");
    }
    QFunction q(mdp.n_states, mdp.n_actions);
    for (StateIndex s = 0; s < mdp.n_states; ++s) {
        for (ActionIndex k = 0; k < mdp.n_actions; ++k) {
            double expected = 0.0;
            const auto row = mdp.transition_row(s, k);
            for (StateIndex t = 0; t < mdp.n_states; ++t) {
                if (row[t] != 0.0) {
                    expected += row[t] * values[t];
                }
            }
            q(s, k) = mdp.reward(s, k) + mdp.discount * expected;
        }
    }
    return q;
}

double pda_list_value(const PdaAvailability& pda, StateIndex s, std::span<const ActionIndex> order,
                      std::span<const double> q) {
    double value = 0.0;
    double none_before = 1.0;  // probability that no earlier-listed action was available
    for (ActionIndex k : order) {
        const double rho = pda(s, k);
        value += none_before * rho * q[k];
        none_before *= 1.0 - rho;
        if (none_before == 0.0) {
            break;
        }
    }
    return value;
}

double explicit_list_value(const ExplicitAvailability& table, StateIndex s,
                           std::span<const ActionIndex> order, std::span<const double> q) {
    double value = 0.0;
    for (const auto& entry : table.states[s]) {
        if (entry.probability == 0.0) {
            continue;
        }
        for (ActionIndex k : order) {
            if (contains(entry.mask, k)) {
                value += entry.probability * q[k];
                break;
            }
        }
    }
    return value;
}

double list_value(const Instance& instance, StateIndex s, std::span<const ActionIndex> order,
                  std::span<const double> q) {
    if (const auto* pda = instance.pda()) {
        return pda_list_value(*pda, s, order, q);
    }
    if (const auto* table = instance.explicit_table()) {
        return explicit_list_value(*table, s, order, q);
    }
    throw Error(ErrorCode::UnsupportedModel, "exact expectations need a PDA or explicit model");
}

std::vector<double> selection_probabilities(const Instance& instance, StateIndex s,
                                            std::span<const ActionIndex> order) {
    std::vector<double> weights(instance.n_actions(), 0.0);
    if (const auto* pda = instance.pda()) {
        double none_before = 1.0;
        for (ActionIndex k : order) {
            const double rho = (*pda)(s, k);
            weights[k] = none_before * rho;
            none_before *= 1.0 - rho;
        }
        return weights;
    }
    if (const auto* table = instance.explicit_table()) {
        for (const auto& entry : table->states[s]) {
            for (ActionIndex k : order) {
                if (contains(entry.mask, k)) {
                    weights[k] += entry.probability;
                    break;
                }
            }
        }
        return weights;
    }
    throw Error(ErrorCode::UnsupportedModel, "exact expectations need a PDA or explicit model");
}

namespace {

void check_policy(const Instance& instance, const DecisionListPolicy& policy) {
    if (policy.n_states() != instance.n_states() || policy.n_actions() != instance.n_actions()) {
        throw Error(ErrorCode::DimensionMismatch, "decision list does not match the instance");
    }
}

} // namespace

ValueFunction dl_backup_pda(const Instance& instance, const DecisionListPolicy& policy,
                            std::span<const double> values) {
    const auto* pda = instance.pda();
    if (pda == nullptr) {
        throw Error(ErrorCode::UnsupportedModel, "dl_backup_pda needs a PDA model");
    }
    check_policy(instance, policy);
    const QFunction q = q_values(instance.mdp(), values);
    ValueFunction out(instance.n_states());
    for (StateIndex s = 0; s < instance.n_states(); ++s) {
        out[s] = pda_list_value(*pda, s, policy.order(s), q.row(s));
    }
    return out;
}

ValueFunction dl_backup_explicit(const Instance& instance, const DecisionListPolicy& policy,
                                 std::span<const double> values) {
    const auto* table = instance.explicit_table();
    if (table == nullptr) {
        throw Error(ErrorCode::UnsupportedModel, "dl_backup_explicit needs an explicit model");
    }
    check_policy(instance, policy);
    const QFunction q = q_values(instance.mdp(), values);
    ValueFunction out(instance.n_states());
    for (StateIndex s = 0; s < instance.n_states(); ++s) {
        out[s] = explicit_list_value(*table, s, policy.order(s), q.row(s));
    }
    return out;
}

ValueFunction dl_backup_ads(const Instance& instance, const DecisionListPolicy& policy,
                            std::span<const double> values, std::size_t n_samples,
                            std::uint64_t stream) {
    const auto* sampler = instance.sampler();
    if (sampler == nullptr) {
        throw Error(ErrorCode::UnsupportedModel, "dl_backup_ads needs a sampler model");
    }
    if (n_samples == 0) {
        throw Error(ErrorCode::BadSampleCount, "sampled backup needs at least one sample");
    }
    check_policy(instance, policy);
    const QFunction q = q_values(instance.mdp(), values);
    ValueFunction out(instance.n_states());
    for (StateIndex s = 0; s < instance.n_states(); ++s) {
        Rng rng = sampler->stream(s, stream);
        std::vector<std::size_t> chosen(instance.n_actions(), 0);
        for (std::size_t t = 0; t < n_samples; ++t) {
            ++chosen[policy.select(s, sampler->draw(s, rng))];
        }
        double total = 0.0;
        for (ActionIndex k = 0; k < instance.n_actions(); ++k) {
            total += static_cast<double>(chosen[k]) * q(s, k);
        }
        out[s] = total / static_cast<double>(n_samples);
    }
    return out;
}

ValueFunction dl_backup(const Instance& instance, const DecisionListPolicy& policy,
                        std::span<const double> values) {
    if (instance.pda() != nullptr) {
        return dl_backup_pda(instance, policy, values);
    }
    return dl_backup_explicit(instance, policy, values);
}

PolicyChain dl_transition_matrix(const Instance& instance, const DecisionListPolicy& policy) {
    check_policy(instance, policy);
    const BaseMdp& mdp = instance.mdp();
    const std::size_t n = mdp.n_states;
    PolicyChain chain{n, std::vector<double>(n * n, 0.0), ValueFunction(n, 0.0)};
    for (StateIndex s = 0; s < n; ++s) {
        const auto weights = selection_probabilities(instance, s, policy.order(s));
        for (ActionIndex k = 0; k < mdp.n_actions; ++k) {
            if (weights[k] == 0.0) {
                continue;
            }
            chain.rewards[s] += weights[k] * mdp.reward(s, k);
            const auto row = mdp.transition_row(s, k);
            for (StateIndex t = 0; t < n; ++t) {
                chain.transitions[s * n + t] += weights[k] * row[t];
            }
        }
    }
    return chain;
}

std::vector<ActionIndex> greedy_order(std::span<const double> q) {
    std::vector<ActionIndex> order(q.size());
    std::iota(order.begin(), order.end(), ActionIndex{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](ActionIndex a, ActionIndex b) { return q[a] > q[b]; });
    return order;
}

DecisionListPolicy greedy_dl(const QFunction& q) {
    std::vector<std::vector<ActionIndex>> orders;
    orders.reserve(q.n_states());
    for (StateIndex s = 0; s < q.n_states(); ++s) {
        orders.push_back(greedy_order(q.row(s)));
    }
    return DecisionListPolicy(std::move(orders));
}

} // namespace sas

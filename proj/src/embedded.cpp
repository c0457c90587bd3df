#include "sas/embedded.hpp"

#include "sas/backup.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace sas {

std::size_t EmbeddedMdp::find(StateIndex s, ActionMask available) const {
    const auto first = states.begin() + static_cast<std::ptrdiff_t>(state_begin[s]);
    const auto last = states.begin() + static_cast<std::ptrdiff_t>(state_begin[s + 1]);
    const auto it = std::lower_bound(first, last, available, [](const EmbeddedState& e, ActionMask mask) {
        return e.available < mask;
    });
    if (it != last && it->available == available) {
        return static_cast<std::size_t>(it - states.begin());
    }
    return states.size();
}

EmbeddedMdp build_embedded(const Instance& instance) {
    if (!instance.is_exact()) {
        throw Error(ErrorCode::UnsupportedModel, "the embedded MDP needs a PDA or explicit model");
    }
    const BaseMdp& mdp = instance.mdp();
    if (mdp.n_actions > kMaxEmbeddedActions) {
        throw Error(ErrorCode::TooLarge, "the embedded MDP is limited to " +
                                             std::to_string(kMaxEmbeddedActions) + " actions");
    }

    EmbeddedMdp emb;
    emb.n_base_states = mdp.n_states;
    emb.n_actions = mdp.n_actions;
    emb.discount = mdp.discount;
    emb.state_begin.push_back(0);
    for (StateIndex s = 0; s < mdp.n_states; ++s) {
        for (const auto& entry : positive_support(instance.availability(), s)) {
            emb.states.push_back({s, entry.mask, entry.probability});
        }
        emb.state_begin.push_back(emb.states.size());
    }

    // Size check before allocating the transition table.
    std::size_t total = 0;
    for (const auto& state : emb.states) {
        for (ActionIndex k : mask_actions(state.available)) {
            const auto row = mdp.transition_row(state.base, k);
            for (StateIndex t = 0; t < mdp.n_states; ++t) {
                if (row[t] > 0.0) {
                    total += emb.state_begin[t + 1] - emb.state_begin[t];
                }
            }
        }
        if (total > kMaxEmbeddedEntries) {
            throw Error(ErrorCode::TooLarge, "the embedded transition table is too large");
        }
    }

    emb.entries.reserve(total);
    emb.row_begin.push_back(0);
    for (const auto& state : emb.states) {
        for (ActionIndex k : mask_actions(state.available)) {
            EmbeddedRow row{k, mdp.reward(state.base, k), emb.entries.size(), 0};
            const auto base_row = mdp.transition_row(state.base, k);
            for (StateIndex t = 0; t < mdp.n_states; ++t) {
                if (base_row[t] <= 0.0) {
                    continue;
                }
                for (std::size_t e = emb.state_begin[t]; e < emb.state_begin[t + 1]; ++e) {
                    emb.entries.push_back({e, base_row[t] * emb.states[e].probability});
                }
            }
            row.end = emb.entries.size();
            emb.rows.push_back(row);
        }
        emb.row_begin.push_back(emb.rows.size());
    }
    return emb;
}

namespace {

struct Greedy {
    double value;
    ActionIndex action;
};

Greedy best_row(const EmbeddedMdp& emb, std::size_t e, std::span<const double> values) {
    Greedy best{-std::numeric_limits<double>::infinity(), 0};
    for (const auto& row : emb.rows_of(e)) {
        double expected = 0.0;
        for (const auto& tr : emb.successors(row)) {
            expected += tr.probability * values[tr.target];
        }
        const double q = row.reward + emb.discount * expected;
        // rows are in ascending action order, so strict > keeps the lowest index on ties
        if (q > best.value) {
            best = {q, row.action};
        }
    }
    return best;
}

} // namespace

ValueFunction embedded_bellman(const EmbeddedMdp& emb, std::span<const double> values) {
    ValueFunction out(emb.size());
    for (std::size_t e = 0; e < emb.size(); ++e) {
        out[e] = best_row(emb, e, values).value;
    }
    return out;
}

EmbeddedSolution solve_embedded_vi(const EmbeddedMdp& emb, double eps, std::size_t max_iters) {
    if (!(eps > 0.0)) {
        throw Error(ErrorCode::BadParameter, "eps must be positive");
    }
    const double threshold = emb.discount > 0.0 ? eps * (1.0 - emb.discount) / (2.0 * emb.discount)
                                                : std::numeric_limits<double>::infinity();
    EmbeddedSolution sol;
    sol.values.assign(emb.size(), 0.0);
    sol.residual = std::numeric_limits<double>::infinity();
    while (sol.iterations < max_iters) {
        ValueFunction next = embedded_bellman(emb, sol.values);
        double residual = 0.0;
        for (std::size_t e = 0; e < emb.size(); ++e) {
            residual = std::max(residual, std::abs(next[e] - sol.values[e]));
        }
        sol.values = std::move(next);
        sol.residual = residual;
        ++sol.iterations;
        if (residual <= threshold) {
            break;
        }
    }
    if (sol.residual > threshold) {
        throw Error(ErrorCode::NotConverged, "embedded value iteration hit the iteration limit");
    }
    sol.policy.resize(emb.size());
    for (std::size_t e = 0; e < emb.size(); ++e) {
        sol.policy[e] = best_row(emb, e, sol.values).action;
    }
    return sol;
}

ValueFunction evaluate_embedded_policy(const EmbeddedMdp& emb, std::span<const ActionIndex> policy) {
    if (policy.size() != emb.size()) {
        throw Error(ErrorCode::DimensionMismatch, "embedded policy length does not match");
    }
    const auto n = static_cast<Eigen::Index>(emb.size());
    Eigen::MatrixXd system = Eigen::MatrixXd::Identity(n, n);
    Eigen::VectorXd rhs(n);
    for (std::size_t e = 0; e < emb.size(); ++e) {
        const auto rows = emb.rows_of(e);
        const auto it = std::find_if(rows.begin(), rows.end(),
                                     [&](const EmbeddedRow& r) { return r.action == policy[e]; });
        if (it == rows.end()) {
            throw Error(ErrorCode::UnavailableAction,
                        "embedded policy picks an action outside the available set");
        }
        rhs(static_cast<Eigen::Index>(e)) = it->reward;
        for (const auto& tr : emb.successors(*it)) {
            system(static_cast<Eigen::Index>(e), static_cast<Eigen::Index>(tr.target)) -=
                emb.discount * tr.probability;
        }
    }
    const Eigen::VectorXd solution = system.partialPivLu().solve(rhs);
    return ValueFunction(solution.data(), solution.data() + n);
}

ValueFunction compress_value(const EmbeddedMdp& emb, std::span<const double> embedded_values) {
    if (embedded_values.size() != emb.size()) {
        throw Error(ErrorCode::DimensionMismatch, "embedded value length does not match");
    }
    ValueFunction out(emb.n_base_states, 0.0);
    for (std::size_t e = 0; e < emb.size(); ++e) {
        out[emb.states[e].base] += emb.states[e].probability * embedded_values[e];
    }
    return out;
}

ActionIndex EmbeddedPolicy::operator()(StateIndex s, ActionMask available) const {
    if (available == 0) {
        throw Error(ErrorCode::EmptySet, "no action is available");
    }
    ActionIndex best = q_.n_actions();
    for (ActionIndex k : mask_actions(available)) {
        if (k >= q_.n_actions()) {
            throw Error(ErrorCode::DimensionMismatch, "available set names an unknown action");
        }
        if (best == q_.n_actions() || q_(s, k) > q_(s, best)) {
            best = k;
        }
    }
    return best;
}

double EmbeddedPolicy::value(StateIndex s, ActionMask available) const {
    return q_(s, (*this)(s, available));
}

EmbeddedPolicy extract_embedded_policy(const Instance& instance, std::span<const double> compressed_values) {
    return EmbeddedPolicy(q_values(instance.mdp(), compressed_values));
}

} // namespace sas

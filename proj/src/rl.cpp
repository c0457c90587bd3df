#include "sas/rl.hpp"

#include "sas/backup.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <string>

namespace sas {

SasEnvironment::SasEnvironment(Instance instance, std::uint64_t seed)
    : instance_(std::move(instance)), seed_(seed), rng_(derive_seed(seed, 0x656e76)) {
    if (instance_.n_actions() > kMaxMaskActions) {
        throw Error(ErrorCode::TooLarge, "the simulator supports at most 62 actions");
    }
}

ActionMask SasEnvironment::draw(StateIndex s) {
    const ActionMask mask = draw_subset(instance_.availability(), s, rng_);
    if (mask == 0) {
        throw Error(ErrorCode::EmptySubsetPossible,
                    "drew an empty available set at state " + std::to_string(s));
    }
    return mask;
}

ActionMask SasEnvironment::reset(StateIndex start) {
    if (start >= instance_.n_states()) {
        throw Error(ErrorCode::BadParameter, "start state out of range");
    }
    state_ = start;
    available_ = draw(start);
    return available_;
}

ActionMask SasEnvironment::reset() {
    return reset(static_cast<StateIndex>(rng_.below(instance_.n_states())));
}

StepResult SasEnvironment::step(ActionIndex action) {
    if (action >= instance_.n_actions() || !contains(available_, action)) {
        throw Error(ErrorCode::UnavailableAction,
                    "action " + std::to_string(action) + " is not available at state " +
                        std::to_string(state_));
    }
    const BaseMdp& mdp = instance_.mdp();
    const auto row = mdp.transition_row(state_, action);
    const double u = rng_.uniform();
    StateIndex next = mdp.n_states;
    double cumulative = 0.0;
    for (StateIndex t = 0; t < mdp.n_states; ++t) {
        cumulative += row[t];
        if (u < cumulative) {
            next = t;
            break;
        }
    }
    if (next == mdp.n_states) {
        // u landed in the rounding gap above the last cumulative sum
        for (StateIndex t = mdp.n_states; t-- > 0;) {
            if (row[t] > 0.0) {
                next = t;
                break;
            }
        }
    }
    StepResult out{next, draw(next), mdp.reward(state_, action)};
    state_ = next;
    available_ = out.available;
    ++steps_;
    return out;
}

ActionIndex greedy_action(const QFunction& q, StateIndex s, ActionMask available) {
    if (available == 0) {
        throw Error(ErrorCode::EmptySet, "no action is available");
    }
    ActionIndex best = q.n_actions();
    for (ActionIndex k = 0; k < q.n_actions(); ++k) {
        if (contains(available, k) && (best == q.n_actions() || q(s, k) > q(s, best))) {
            best = k;
        }
    }
    if (best == q.n_actions()) {
        throw Error(ErrorCode::EmptySet, "available set has no action of this Q-function");
    }
    return best;
}

double learning_rate(const LearningConfig& config, std::uint64_t visits) {
    return config.lr_scale / std::pow(1.0 + static_cast<double>(visits), config.lr_exponent);
}

double exploration_rate(const LearningConfig& config, std::uint64_t step) {
    const double decay_steps = config.decay_fraction * static_cast<double>(config.steps);
    if (decay_steps <= 0.0 || static_cast<double>(step) >= decay_steps) {
        return config.epsilon_end;
    }
    const double frac = static_cast<double>(step) / decay_steps;
    return config.epsilon_start + (config.epsilon_end - config.epsilon_start) * frac;
}

namespace {

void check_config(const LearningConfig& config) {
    if (config.steps == 0) {
        throw Error(ErrorCode::BadSampleCount, "learning needs at least one step");
    }
    if (config.horizon == 0) {
        throw Error(ErrorCode::BadParameter, "horizon must be positive");
    }
    const bool eps_ok = config.epsilon_start >= 0.0 && config.epsilon_start <= 1.0 &&
                        config.epsilon_end >= 0.0 && config.epsilon_end <= 1.0;
    if (!eps_ok) {
        throw Error(ErrorCode::BadParameter, "exploration rates must lie in [0, 1]");
    }
    // alpha must stay in [0, 1) from the first update (visits = 1) on
    if (!(config.lr_scale > 0.0) || !(learning_rate(config, 1) < 1.0)) {
        throw Error(ErrorCode::BadParameter, "learning rate must lie in [0, 1)");
    }
    if (!(config.lr_exponent > 0.5 && config.lr_exponent <= 1.0)) {
        throw Error(ErrorCode::BadParameter, "learning-rate exponent must lie in (0.5, 1]");
    }
}

ActionIndex uniform_member(ActionMask mask, Rng& rng) {
    const auto actions = mask_actions(mask);
    return actions[rng.below(actions.size())];
}

} // namespace

LearningResult sas_q_learning(SasEnvironment& env, const LearningConfig& config) {
    check_config(config);
    const Instance& instance = env.instance();
    const std::size_t n = instance.n_states();
    const std::size_t m = instance.n_actions();
    const double gamma = instance.discount();

    LearningResult result;
    result.q = QFunction(n, m, config.initial_q);
    std::vector<std::uint64_t> visits(n * m, 0);
    Rng agent(derive_seed(config.seed, 0x6167656e74));

    std::uint64_t episode = 0;
    while (result.steps < config.steps) {
        if (config.start_state) {
            env.reset(*config.start_state);
        } else {
            env.reset();
        }
        result.episode_epsilon.push_back(exploration_rate(config, result.steps));
        double discounted = 0.0;
        double weight = 1.0;
        for (std::uint64_t t = 0; t < config.horizon && result.steps < config.steps; ++t) {
            const StateIndex s = env.state();
            const ActionMask available = env.available();
            const double epsilon = exploration_rate(config, result.steps);
            const ActionIndex k = agent.bernoulli(epsilon) ? uniform_member(available, agent)
                                                           : greedy_action(result.q, s, available);
            const StepResult step = env.step(k);

            const double target =
                step.reward + gamma * result.q(step.next_state, greedy_action(result.q, step.next_state,
                                                                              step.available));
            const double alpha = learning_rate(config, ++visits[s * m + k]);
            result.q(s, k) = (1.0 - alpha) * result.q(s, k) + alpha * target;

            if (config.trajectory_log != nullptr) {
                nlohmann::json record = {{"episode", episode}, {"t", t},         {"s", s},
                                         {"available", available}, {"k", k}, {"r", step.reward},
                                         {"s_next", step.next_state}};
                *config.trajectory_log << record.dump() << '\n';
            }
            discounted += weight * step.reward;
            weight *= gamma;
            ++result.steps;
        }
        result.episode_returns.push_back(discounted);
        ++episode;
    }
    return result;
}

std::optional<ValueFunction> value_from_q(const Instance& instance, const QFunction& q) {
    if (!instance.is_exact()) {
        return std::nullopt;
    }
    ValueFunction v(instance.n_states());
    for (StateIndex s = 0; s < instance.n_states(); ++s) {
        v[s] = list_value(instance, s, greedy_order(q.row(s)), q.row(s));
    }
    return v;
}

RolloutEstimate evaluate_policy_rollout(SasEnvironment& env, const DecisionListPolicy& policy,
                                        std::size_t episodes, std::size_t horizon, StateIndex start) {
    if (episodes == 0) {
        throw Error(ErrorCode::BadSampleCount, "rollout needs at least one episode");
    }
    const double gamma = env.instance().discount();
    double sum = 0.0;
    double sum_sq = 0.0;
    for (std::size_t e = 0; e < episodes; ++e) {
        env.reset(start);
        double total = 0.0;
        double weight = 1.0;
        for (std::size_t t = 0; t < horizon; ++t) {
            const StepResult step = env.step(policy.select(env.state(), env.available()));
            total += weight * step.reward;
            weight *= gamma;
        }
        sum += total;
        sum_sq += total * total;
    }
    RolloutEstimate out;
    out.episodes = episodes;
    out.mean = sum / static_cast<double>(episodes);
    if (episodes > 1) {
        const double var = std::max(0.0, (sum_sq - sum * out.mean) / static_cast<double>(episodes - 1));
        out.ci95 = 1.96 * std::sqrt(var / static_cast<double>(episodes));
    }
    return out;
}

} // namespace sas

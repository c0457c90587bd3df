#pragma once

#include "sas/instance.hpp"
#include "sas/rng.hpp"
#include "sas/types.hpp"

#include <cstdint>
#include <optional>
#include <ostream>
#include <span>
#include <vector>

namespace sas {

struct StepResult {
    StateIndex next_state = 0;
    ActionMask available = 0;  ///< realized set at next_state, never empty
    double reward = 0.0;
};

/**
 * Trajectory simulator for an SAS-MDP.
 *
 * Each visit to a state draws a fresh available set from that state's
 * distribution. All randomness comes from one generator seeded by the master
 * seed, so equal seeds and equal action sequences reproduce equal trajectories.
 */
class SasEnvironment {
public:
    SasEnvironment(Instance instance, std::uint64_t seed);

    /// Places the agent at `start` and draws its available set.
    ActionMask reset(StateIndex start);
    /// Uniformly random start state.
    ActionMask reset();

    /// Throws Error(UnavailableAction) if `action` is not in the current available set.
    StepResult step(ActionIndex action);

    StateIndex state() const { return state_; }
    ActionMask available() const { return available_; }
    std::uint64_t steps() const { return steps_; }
    std::uint64_t seed() const { return seed_; }
    const Instance& instance() const { return instance_; }

private:
    ActionMask draw(StateIndex s);

    Instance instance_;
    std::uint64_t seed_;
    Rng rng_;
    StateIndex state_ = 0;
    ActionMask available_ = 0;
    std::uint64_t steps_ = 0;
};

/// Highest-Q action within `available`, ties to the lowest index. Error(EmptySet) if empty.
ActionIndex greedy_action(const QFunction& q, StateIndex s, ActionMask available);

struct LearningConfig {
    std::uint64_t steps = 200'000;
    std::uint64_t horizon = 100;          ///< steps per episode before a reset
    std::uint64_t seed = 0;
    double initial_q = 0.0;
    /// alpha = lr_scale / (1 + visits(s,k))^lr_exponent, visits counting the current update.
    double lr_scale = 1.0;
    double lr_exponent = 0.8;
    /// epsilon decays linearly from start to end over the first decay_fraction of steps.
    double epsilon_start = 1.0;
    double epsilon_end = 0.05;
    double decay_fraction = 0.5;
    /// Fixed start state per episode; uniform when empty.
    std::optional<StateIndex> start_state;
    /// Optional line-delimited JSON log, one record per step.
    std::ostream* trajectory_log = nullptr;
};

struct LearningResult {
    QFunction q;
    std::vector<double> episode_returns;  ///< discounted return of each episode
    std::vector<double> episode_epsilon;  ///< exploration rate at the start of each episode
    std::uint64_t steps = 0;
};

double learning_rate(const LearningConfig& config, std::uint64_t visits);
double exploration_rate(const LearningConfig& config, std::uint64_t step);

/// Tabular Q-learning whose target maximizes over the realized next available set only.
LearningResult sas_q_learning(SasEnvironment& env, const LearningConfig& config);

/// E_A max_{k in A} Q(s,k); empty for a sampler instance, whose distribution is unknown.
std::optional<ValueFunction> value_from_q(const Instance& instance, const QFunction& q);

struct RolloutEstimate {
    double mean = 0.0;
    double ci95 = 0.0;  ///< 1.96 standard errors
    std::size_t episodes = 0;
};

/// Monte-Carlo discounted return of a decision list from `start`, truncated at `horizon`.
RolloutEstimate evaluate_policy_rollout(SasEnvironment& env, const DecisionListPolicy& policy,
                                        std::size_t episodes, std::size_t horizon, StateIndex start = 0);

} // namespace sas

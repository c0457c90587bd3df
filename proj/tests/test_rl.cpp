#include "oracles.hpp"

#include "sas/generators.hpp"
#include "sas/rl.hpp"
#include "sas/solve.hpp"

#include <doctest.h>

#include <sstream>

using namespace sas;

TEST_CASE("environment trajectories depend only on the seed") {
    const Instance inst = two_state_instance(0.2, 0.9);
    SasEnvironment a(inst, 77), b(inst, 77), c(inst, 78);
    CHECK(a.reset() == b.reset());
    c.reset();
    bool differs = false;
    for (int t = 0; t < 500; ++t) {
        const ActionIndex k = mask_actions(a.available()).back();
        const StepResult ra = a.step(k);
        const StepResult rb = b.step(k);
        CHECK(ra.next_state == rb.next_state);
        CHECK(ra.available == rb.available);
        CHECK(ra.reward == rb.reward);
        CHECK(ra.available != 0);
        if (c.available() != a.available()) {
            differs = true;
        }
        c.step(mask_actions(c.available()).back());
    }
    CHECK(a.steps() == 500);
    CHECK(differs);
}

TEST_CASE("unavailable actions are rejected") {
    const Instance inst = two_state_instance(0.0 + 1e-9, 0.9);
    SasEnvironment env(inst, 1);
    env.reset(1);
    while (env.available() != 0b10) {
        env.reset(1);
    }
    CHECK_THROWS_AS(env.step(0), Error);
    CHECK_THROWS_AS(env.step(5), Error);
    CHECK_THROWS_AS(env.reset(2), Error);
}

TEST_CASE("availability frequencies in the simulator") {
    const Instance inst = two_state_instance(0.3, 0.9);
    SasEnvironment env(inst, 5);
    int up = 0;
    constexpr int trials = 40000;
    for (int i = 0; i < trials; ++i) {
        up += contains(env.reset(1), 0) ? 1 : 0;
    }
    CHECK(std::abs(up / double(trials) - 0.3) < 4 * std::sqrt(0.21 / trials));
}

TEST_CASE("schedules") {
    LearningConfig config;
    config.steps = 1000;
    CHECK(exploration_rate(config, 0) == 1.0);
    CHECK(exploration_rate(config, 250) == doctest::Approx(0.525));
    CHECK(exploration_rate(config, 500) == 0.05);
    CHECK(exploration_rate(config, 999) == 0.05);
    CHECK(learning_rate(config, 1) == doctest::Approx(std::pow(2.0, -0.8)));
    CHECK(learning_rate(config, 3) == doctest::Approx(std::pow(4.0, -0.8)));
}

TEST_CASE("learning config errors") {
    const Instance inst = two_state_instance(0.2, 0.9);
    SasEnvironment env(inst, 0);
    LearningConfig config;
    config.steps = 0;
    try {
        (void)sas_q_learning(env, config);
        FAIL("expected BadSampleCount");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::BadSampleCount);
    }
    config.steps = 10;
    config.epsilon_start = 1.5;
    CHECK_THROWS_AS(sas_q_learning(env, config), Error);
    config.epsilon_start = 1.0;
    config.lr_exponent = 0.4;
    CHECK_THROWS_AS(sas_q_learning(env, config), Error);
}

TEST_CASE("learning is reproducible and logs every transition") {
    const Instance inst = two_state_instance(0.2, 0.9);
    LearningConfig config;
    config.steps = 2000;
    config.horizon = 50;
    config.seed = 4;
    std::ostringstream log_a, log_b;
    SasEnvironment env_a(inst, 4), env_b(inst, 4);
    config.trajectory_log = &log_a;
    const LearningResult a = sas_q_learning(env_a, config);
    config.trajectory_log = &log_b;
    const LearningResult b = sas_q_learning(env_b, config);
    CHECK(a.q == b.q);
    CHECK(a.episode_returns == b.episode_returns);
    CHECK(log_a.str() == log_b.str());
    CHECK(a.episode_returns.size() == 40);
    const std::string text = log_a.str();
    CHECK(std::count(text.begin(), text.end(), '\n') == 2000);
    CHECK(text.find("\"s_next\"") != std::string::npos);
}

TEST_CASE("Q-learning recovers the optimal list on a random instance") {
    RandomInstanceSpec spec;
    spec.seed = 12;
    spec.n_states = 3;
    spec.n_actions = 2;
    spec.discount = 0.8;
    const Instance inst = random_instance(spec);
    SasEnvironment env(inst, 12);
    LearningConfig config;
    config.steps = 300000;
    config.seed = 12;
    const LearningResult learned = sas_q_learning(env, config);
    const auto v = value_from_q(inst, learned.q);
    REQUIRE(v);
    CHECK(oracle::max_abs_diff(*v, oracle::optimal_value(inst)) < 0.1);
}

TEST_CASE("rollouts agree with exact policy evaluation") {
    const Instance inst = two_state_instance(0.2, 0.9);
    const DecisionListPolicy policy({{1, 0}, {0, 1}});
    const ValueFunction exact = policy_evaluation(inst, policy);
    SasEnvironment env(inst, 31);
    const RolloutEstimate est = evaluate_policy_rollout(env, policy, 4000, 300, 0);
    // the 300-step truncation loses at most 0.9^300 * 10
    CHECK(std::abs(est.mean - exact[0]) < 3.0 * est.ci95 / 1.96 + 1e-9);
    CHECK(est.ci95 > 0.0);
    CHECK_THROWS_AS(evaluate_policy_rollout(env, policy, 0, 10), Error);
}

TEST_CASE("value_from_q is unavailable for samplers") {
    const Instance sampled = two_state_instance(0.2, 0.9, AvailabilityKind::Sampler, 1);
    CHECK_FALSE(value_from_q(sampled, QFunction(2, 2)).has_value());
}

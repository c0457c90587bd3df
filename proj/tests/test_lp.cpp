#include "oracles.hpp"

#include "sas/generators.hpp"
#include "sas/lp.hpp"
#include "sas/solve.hpp"

#include <doctest.h>

using namespace sas;

TEST_CASE("ranking constraint value equals the subset expectation") {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        RandomInstanceSpec spec;
        spec.seed = seed;
        spec.n_states = 3;
        spec.n_actions = 3;
        spec.kind = seed % 2 ? AvailabilityKind::Explicit : AvailabilityKind::Pda;
        const Instance inst = random_instance(spec);
        const std::vector<double> v{0.5, -1.5, 2.0};
        const auto q = oracle::q(inst, v);
        for (const auto& sigma : oracle::permutations(3)) {
            const DlConstraint c = make_dl_constraint(inst, 1, sigma);
            const std::vector<double> row(q.begin() + 3, q.begin() + 6);
            CHECK(c.q_value(v) == doctest::Approx(oracle::list_value(inst, 1, sigma, row)).epsilon(1e-12));
            const LpRow lp_row = c.row();
            double lhs = 0.0;
            for (std::size_t t = 0; t < 3; ++t) {
                lhs += lp_row.coefficients[t] * v[t];
            }
            CHECK(lhs - lp_row.rhs == doctest::Approx(v[1] - c.q_value(v)).epsilon(1e-12));
        }
    }
}

TEST_CASE("LP value equals policy iteration") {
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
        RandomInstanceSpec spec;
        spec.seed = seed + 40;
        spec.n_states = 1 + seed % 5;
        spec.n_actions = 1 + seed % 4;
        spec.kind = seed % 2 ? AvailabilityKind::Explicit : AvailabilityKind::Pda;
        const Instance inst = random_instance(spec);
        const LpResult lp = solve_lp(inst);
        CHECK(oracle::max_abs_diff(lp.values, policy_iteration(inst).values) < 1e-7);
        CHECK(lp.final_max_violation <= 1e-8);
        CHECK(lp.objective_trace.size() == lp.rounds);
        for (std::size_t i = 1; i < lp.objective_trace.size(); ++i) {
            CHECK(lp.objective_trace[i] >= lp.objective_trace[i - 1] - 1e-9);
        }
    }
}

TEST_CASE("two-state LP by hand") {
    const LpResult lp = solve_lp(two_state_instance(0.2, 0.9));
    CHECK(lp.values[0] == doctest::Approx(5.0).epsilon(1e-9));
    CHECK(lp.values[1] == doctest::Approx(4.7).epsilon(1e-9));
}

TEST_CASE("LP failure modes") {
    RandomInstanceSpec spec;
    spec.n_states = 5;
    spec.n_actions = 4;
    spec.seed = 3;
    const Instance inst = random_instance(spec);
    LpOptions one_round;
    one_round.max_rounds = 1;
    if (solve_lp(inst).rounds > 1) {
        CHECK_THROWS_AS(solve_lp(inst, one_round), Error);
    }
    const Instance sampled = inst.with_availability(make_sampler(inst.availability(), 0));
    CHECK_THROWS_AS(solve_lp(sampled), Error);
    LpOptions bad_weights;
    bad_weights.alpha = {1.0};
    CHECK_THROWS_AS(solve_lp(inst, bad_weights), Error);
}

#include "oracles.hpp"

#include "sas/embedded.hpp"
#include "sas/generators.hpp"
#include "sas/solve.hpp"

#include <doctest.h>

using namespace sas;

TEST_CASE("two-state embedded MDP") {
    const Instance inst = two_state_instance(0.2, 0.9);
    const EmbeddedMdp emb = build_embedded(inst);
    CHECK(emb.size() == 3);
    CHECK(emb.find(1, 0b10) != emb.size());
    CHECK(emb.find(1, 0b01) == emb.size());
    for (std::size_t e = 0; e < emb.size(); ++e) {
        for (const auto& row : emb.rows_of(e)) {
            CHECK(contains(emb.states[e].available, row.action));
            double total = 0.0;
            for (const auto& t : emb.successors(row)) {
                total += t.probability;
            }
            CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
        }
    }
    const EmbeddedSolution sol = solve_embedded_vi(emb, 1e-10);
    const ValueFunction v = compress_value(emb, sol.values);
    CHECK(v[0] == doctest::Approx(5.0).epsilon(1e-9));
    CHECK(v[1] == doctest::Approx(4.7).epsilon(1e-9));
}

TEST_CASE("embedded optimum matches brute force") {
    for (std::uint64_t seed = 0; seed < 25; ++seed) {
        RandomInstanceSpec spec;
        spec.seed = seed;
        spec.n_states = 1 + seed % 3;
        spec.n_actions = 1 + seed % 3;
        spec.kind = seed % 2 ? AvailabilityKind::Explicit : AvailabilityKind::Pda;
        const Instance inst = random_instance(spec);
        const EmbeddedMdp emb = build_embedded(inst);
        const EmbeddedSolution sol = solve_embedded_vi(emb, 1e-11);
        CHECK(oracle::max_abs_diff(compress_value(emb, sol.values), oracle::best_embedded_value(inst)) < 1e-9);
        const ValueFunction exact = evaluate_embedded_policy(emb, sol.policy);
        CHECK(oracle::max_abs_diff(exact, sol.values) < 1e-9);
    }
}

TEST_CASE("embedded policy reads actions off the compressed value") {
    const Instance inst = two_state_instance(0.2, 0.9);
    const EmbeddedPolicy policy = extract_embedded_policy(inst, std::vector<double>{5.0, 4.7});
    CHECK(policy(0, 0b11) == 0);
    CHECK(policy(1, 0b11) == 0);
    CHECK(policy(1, 0b10) == 1);
    CHECK(policy.value(1, 0b11) == doctest::Approx(5.5));
    CHECK_THROWS_AS(policy(0, 0), Error);
}

TEST_CASE("embedded construction limits") {
    const Instance sampled = two_state_instance(0.2, 0.9, AvailabilityKind::Sampler, 3);
    CHECK_THROWS_AS(build_embedded(sampled), Error);
    BaseMdp wide = BaseMdp::zeros(1, 15, 0.5);
    for (ActionIndex k = 0; k < 15; ++k) {
        wide.transition_row(0, k)[0] = 1.0;
    }
    const Instance big = validate(wide, PdaAvailability::always(1, 15));
    try {
        (void)build_embedded(big);
        FAIL("expected TooLarge");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::TooLarge);
    }
}

#include "sas/experiments.hpp"
#include "sas/routing.hpp"

#include <doctest.h>

#include <cmath>

using namespace sas;

TEST_CASE("two-state curve follows the closed forms") {
    for (double gamma : {0.6, 0.9, 0.95}) {
        for (double p : default_p_grid()) {
            const CurvePoint pt = two_state_point(p, gamma);
            const double sas = std::max(0.5 / (1 - gamma), (0.5 + gamma * p) / (1 - gamma * gamma));
            const double naive = (0.5 + gamma * p) / (1 - gamma * gamma);
            CHECK(pt.v_sas == doctest::Approx(sas).epsilon(1e-10));
            CHECK(pt.v_naive == doctest::Approx(naive).epsilon(1e-10));
            if (p >= 0.5) {
                CHECK(std::abs(pt.fraction_lost) <= 1e-9);
            } else {
                CHECK(pt.fraction_lost > 0.0);
            }
        }
    }
    CHECK(two_state_point(0.2, 0.9).fraction_lost == doctest::Approx(0.28421052631578947).epsilon(1e-12));
}

TEST_CASE("river graph shape") {
    const RoutingGraph g = make_river_graph(RoutingSpec{});
    CHECK(g.n_nodes == 12);
    std::size_t bridges = 0;
    for (const auto& e : g.edges) {
        bridges += e.bridge ? 1 : 0;
        CHECK(e.cost >= 1.0);
        CHECK(e.cost <= 3.0);
    }
    CHECK(bridges == 2);
    RoutingSpec tiny;
    tiny.nodes = 6;
    CHECK_THROWS_AS(make_river_graph(tiny), Error);
}

TEST_CASE("routing instance rejects unreachable destinations") {
    RoutingSpec spec;
    spec.edge_availability = 0.0;
    const RoutingGraph g = make_river_graph(spec);
    try {
        (void)routing_instance(g, spec, 0.5);
        FAIL("expected DisconnectedGraph");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::DisconnectedGraph);
    }
}

TEST_CASE("SAS-optimal routing never loses to the oblivious route") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        for (std::size_t nodes : {8, 12, 20}) {
            RoutingSpec spec;
            spec.seed = seed;
            spec.nodes = nodes;
            const auto rows = routing_experiment(spec, {0.05, 0.1, 0.3, 0.6, 1.0});
            for (const auto& row : rows) {
                CHECK(row.sas_cost <= row.oblivious_cost + 1e-9);
            }
            CHECK(rows.back().sas_cost == doctest::Approx(rows.back().oblivious_cost).epsilon(1e-12));
        }
    }
}

TEST_CASE("without the bridge both policies take the bridgeless optimum") {
    RoutingSpec spec;
    spec.include_bridge = false;
    const auto rows = routing_experiment(spec, {0.1, 0.5, 1.0});
    for (const auto& row : rows) {
        CHECK(row.sas_cost == doctest::Approx(rows.front().sas_cost).epsilon(1e-12));
        CHECK(row.oblivious_cost == doctest::Approx(row.sas_cost).epsilon(1e-12));
    }
}

#include "sas/routing.hpp"

#include "sas/experiments.hpp"
#include "sas/rng.hpp"

#include <algorithm>
#include <deque>

namespace sas {

RoutingGraph make_river_graph(const RoutingSpec& spec) {
    if (spec.nodes < 7) {
        throw Error(ErrorCode::BadParameter, "the river graph needs at least 7 nodes");
    }
    const std::size_t far = std::max<std::size_t>(1, (spec.nodes - 2) / 4);
    const std::size_t detour = far + 2;
    const std::size_t approach = spec.nodes - far - detour;

    RoutingGraph g;
    g.n_nodes = spec.nodes;
    g.source = 0;
    g.junction = approach;
    g.destination = approach + far;
    Rng rng(derive_seed(spec.seed, 0x726f757465));
    auto road = [&](std::size_t a, std::size_t b, double lo, bool bridge) {
        const double cost = lo + rng.uniform();
        g.edges.push_back({a, b, cost, bridge});
        g.edges.push_back({b, a, cost, bridge});
    };

    // nodes 0..approach: approach road; approach+1..approach+far: far side ending at the destination
    for (std::size_t i = 0; i < approach; ++i) {
        road(i, i + 1, 1.0, false);
    }
    if (spec.include_bridge) {
        road(g.junction, g.junction + 1, 1.0, true);
    }
    for (std::size_t i = g.junction + 1; i < g.destination; ++i) {
        road(i, i + 1, 1.0, false);
    }
    // detour nodes follow the destination
    std::size_t prev = g.junction;
    for (std::size_t i = g.destination + 1; i < spec.nodes; ++i) {
        road(prev, i, 2.0, false);
        prev = i;
    }
    road(prev, g.destination, 2.0, false);
    return g;
}

Instance routing_instance(const RoutingGraph& g, const RoutingSpec& spec, double bridge_p) {
    const std::size_t n = g.n_nodes;
    std::vector<std::vector<const RoadEdge*>> out(n);
    for (const auto& e : g.edges) {
        out[e.from].push_back(&e);
    }
    std::size_t degree = 0;
    for (auto& list : out) {
        std::sort(list.begin(), list.end(), [](const RoadEdge* a, const RoadEdge* b) { return a->to < b->to; });
        degree = std::max(degree, list.size());
    }
    const std::size_t m = 1 + degree;

    BaseMdp mdp = BaseMdp::zeros(n, m, spec.discount);
    PdaAvailability pda{n, m, std::vector<double>(n * m, 0.0)};
    for (StateIndex s = 0; s < n; ++s) {
        const bool home = s == g.destination;
        for (ActionIndex k = 0; k < m; ++k) {
            mdp.transition_row(s, k)[s] = 1.0;
            mdp.reward(s, k) = home ? 0.0 : -spec.noop_cost;
        }
        pda(s, 0) = 1.0;
        if (home) {
            continue;
        }
        for (std::size_t i = 0; i < out[s].size(); ++i) {
            const RoadEdge& e = *out[s][i];
            auto row = mdp.transition_row(s, i + 1);
            row[s] = 0.0;
            row[e.to] = 1.0;
            mdp.reward(s, i + 1) = -e.cost;
            pda(s, i + 1) = e.bridge ? bridge_p : spec.edge_availability;
        }
    }

    // every node must reach the destination through edges that are sometimes available
    std::vector<bool> reached(n, false);
    std::deque<std::size_t> frontier{g.destination};
    reached[g.destination] = true;
    while (!frontier.empty()) {
        const std::size_t v = frontier.front();
        frontier.pop_front();
        for (const auto& e : g.edges) {
            if (e.to == v && !reached[e.from] && (e.bridge ? bridge_p : spec.edge_availability) > 0.0) {
                reached[e.from] = true;
                frontier.push_back(e.from);
            }
        }
    }
    if (std::find(reached.begin(), reached.end(), false) != reached.end()) {
        throw Error(ErrorCode::DisconnectedGraph, "some node cannot reach the destination");
    }
    return validate(std::move(mdp), std::move(pda));
}

std::vector<RoutingRow> routing_experiment(const RoutingSpec& spec, const std::vector<double>& bridge_grid) {
    const RoutingGraph graph = make_river_graph(spec);
    std::vector<RoutingRow> rows;
    for (double p : bridge_grid) {
        const ObliviousComparison cmp = compare_oblivious(routing_instance(graph, spec, p), 1e-9);
        rows.push_back({p, -cmp.sas_values[graph.source], -cmp.oblivious_values[graph.source]});
    }
    return rows;
}

} // namespace sas

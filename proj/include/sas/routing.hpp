#pragma once

#include "sas/instance.hpp"

#include <cstdint>
#include <vector>

namespace sas {

/**
 * River-crossing road network. An approach road leads from the source to a
 * junction; from there a bridge plus a short far-side road reaches the
 * destination, and a slower detour road reaches it without the bridge.
 * Every road edge is usable in both directions.
 */
struct RoutingSpec {
    std::size_t nodes = 12;
    double edge_availability = 0.5;
    /// Cost of waiting one step in place.
    double noop_cost = 1.0;
    double discount = 0.999;
    std::uint64_t seed = 0;
    /// Drops the bridge from the graph entirely.
    bool include_bridge = true;
};

struct RoadEdge {
    std::size_t from = 0;
    std::size_t to = 0;
    double cost = 0.0;
    bool bridge = false;
};

struct RoutingGraph {
    std::size_t n_nodes = 0;
    std::size_t source = 0;
    std::size_t destination = 0;
    std::size_t junction = 0;
    std::vector<RoadEdge> edges;  ///< directed; each road appears once per direction
};

/// Throws BadParameter when nodes < 7.
RoutingGraph make_river_graph(const RoutingSpec& spec);

/**
 * SAS instance on the graph. Action 0 waits in place and is always available;
 * action i > 0 follows the i-th outgoing edge (ordered by target). Road edges
 * are available with spec.edge_availability, the bridge with bridge_p. Unused
 * action slots are never available. Rewards are negated costs and the
 * destination is absorbing with zero reward.
 *
 * Throws DisconnectedGraph when the destination is unreachable from some node.
 */
Instance routing_instance(const RoutingGraph& graph, const RoutingSpec& spec, double bridge_p);

struct RoutingRow {
    double bridge_p = 0.0;
    double sas_cost = 0.0;        ///< expected discounted cost from the source
    double oblivious_cost = 0.0;
};

std::vector<RoutingRow> routing_experiment(const RoutingSpec& spec, const std::vector<double>& bridge_grid);

} // namespace sas

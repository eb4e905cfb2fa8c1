#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include <json.hpp>

#include "snoc/topology.hpp"
#include "snoc/traffic.hpp"

namespace snoc {

// Cycle costs used by the analytic latency estimator and the routing
// tables. A photonic logical link costs ingress + optical traversal +
// egress; electrical hops one cycle each. When `single_photonic_segment`
// is set (the default, matching the virtual-channel roles enforced by the
// router), a path may cross at most one logical link.
struct CostModel {
    double elec_hop_cycles = 1.0;
    double photonic_edge_cycles = 3.0;
    bool single_photonic_segment = true;

    static CostModel from_config(const KeyValueConfig& cfg);
};

// Resource limits for link activation.
struct SelectionConstraints {
    int total_links = 32;              // E_tot
    int links_per_node_per_direction = 4; // E_node

    int per_snake(int snakes) const;   // E_snake = E_tot / K
    void validate(int snakes) const;
    static SelectionConstraints from_config(const KeyValueConfig& cfg);
};

struct ActivatedLink {
    int snake_id = 0;
    int src = 0;
    int dst = 0;
    bool forward = true;
    int out_slot = 0; // modulator bank slot at src
    int in_slot = 0;  // detector bank slot at dst
    double gain = 0.0;
    int step = 0;
};

struct SelectionStep {
    LogicalLinkCandidate candidate;
    double gain = 0.0;
    bool feasible = false;
    bool accepted = false;
};

// Per-destination next-hop tables over the hybrid graph. The `pre` table
// drives flits that have not crossed a logical link yet; after the optical
// hop a flit follows plain XY to its destination.
struct RoutingTables {
    enum class Action : std::uint8_t { Eject, Mesh, Photonic };
    struct Entry {
        Action action = Action::Eject;
        std::int16_t port = -1;  // mesh output port for Action::Mesh
        std::int16_t link = -1;  // activated-link index for Action::Photonic
    };

    int n = 0;
    std::vector<Entry> pre;    // n * n, indexed node * n + dest
    std::vector<double> cost;  // hybrid path cost in cycles per (src, dst)

    const Entry& at(int node, int dest) const { return pre[static_cast<size_t>(node) * n + dest]; }
    double cost_of(int src, int dst) const { return cost[static_cast<size_t>(src) * n + dst]; }
};

struct LinkSelection {
    std::vector<ActivatedLink> links;
    std::vector<SelectionStep> log;
    std::vector<int> per_snake_count;
    std::vector<int> out_count; // per node
    std::vector<int> in_count;  // per node

    nlohmann::json to_json() const;
};

// Mesh output ports, row-major geometry with y growing downward.
enum MeshPort : int { kPortNorth = 0, kPortEast = 1, kPortSouth = 2, kPortWest = 3, kPortLocal = 4 };

// First XY step from `node` toward `target` (x corrected first).
int xy_next_port(const MeshSpec& mesh, int node, int target);

// Volume-weighted mean path cost of the plain electronic mesh.
// Throws ConfigError when the matrix carries no volume.
double base_latency(const MeshSpec& mesh, const TrafficMatrix& traffic, const CostModel& cost);

// Volume-weighted mean path cost over mesh + activated links.
double weighted_latency(const MeshSpec& mesh, const TrafficMatrix& traffic,
                        const std::vector<ActivatedLink>& links, const CostModel& cost);

// Latency reduction from activating `candidate` on top of `selection`.
double marginal_gain(const LogicalLinkCandidate& candidate, const LinkSelection& selection,
                     const TrafficMatrix& traffic, const SnakeLayout& layout,
                     const CostModel& cost);

// Greedy activation: score every candidate, repeatedly take the best
// feasible one (strictly positive gain), rescoring the remainder after each
// activation. Ties break toward smaller (snake, src, dst).
LinkSelection select_links(const SnakeLayout& layout, const TrafficMatrix& traffic,
                           const SelectionConstraints& constraints, const CostModel& cost);

// Shortest-path next-hop tables for a selection. Photonic edges are taken
// only when they strictly reduce the path cost; electrical steps are
// dimension-ordered.
RoutingTables build_routing_tables(const SnakeLayout& layout, const LinkSelection& selection,
                                   const CostModel& cost);

} // namespace snoc

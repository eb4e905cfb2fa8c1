#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "snoc/selector.hpp"
#include "snoc/traffic.hpp"

namespace snoc {

// Cycle-level simulation parameters. The router is single-stage: one cycle
// moves a flit from an input VC to the next router's input VC (or to the
// ejection port). A logical-link traversal takes ingress + flight + egress
// cycles between the staging VC and the receive queue at the far side.
struct SimConfig {
    double clock_hz = 1e9;
    int elec_hop_cycles = 1;
    int photonic_ingress_cycles = 1;
    int photonic_flight_cycles = 1;
    int photonic_egress_cycles = 1;
    int flit_size_bits = 128;
    int vc_buffer_depth = 4;
    long long warmup_cycles = 0; // packets injected earlier are excluded from latency stats
    long long max_cycles = 0;    // 0: last injection + 1,000,000
    unsigned long long seed = 0; // reserved; the simulator is fully deterministic

    int photonic_edge_cycles() const {
        return photonic_ingress_cycles + photonic_flight_cycles + photonic_egress_cycles;
    }
    void validate() const;
    static SimConfig from_config(const KeyValueConfig& cfg);
};

struct PacketRecord {
    long long id = 0;
    int src = 0;
    int dst = 0;
    int size_flits = 0;
    long long injected = 0;
    long long ejected = 0;
    long long latency = 0;
    bool measured = true;
};

// Results of one trace-driven run: per-packet latencies, aggregate latency
// statistics, and per-resource flit-hop counters for energy accounting.
struct SimReport {
    std::vector<PacketRecord> packets;
    long long cycles = 0;
    long long packets_injected = 0;
    long long packets_ejected = 0;

    double mean_latency = 0.0;
    double p50_latency = 0.0;
    double p95_latency = 0.0;
    double p99_latency = 0.0;
    long long max_latency = 0;

    // Flit-hop counters.
    long long router_traversals = 0; // crossbar traversals feeding a mesh link
    long long link_traversals = 0;   // mesh link crossings
    double link_mm = 0.0;            // total mesh wire length crossed, flit-mm
    std::vector<long long> photonic_link_flits; // per activated link
    long long photonic_flits = 0;
    double photonic_bits = 0.0;

    long long vc_role_violations = 0; // regular/photonic class separation audit

    nlohmann::json to_json() const;
    void latencies_to_csv(std::ostream& os) const;
};

// Runs the trace to drain. Deterministic: identical inputs give identical
// reports. Throws SimError on bad trace references (unknown router,
// loopback packet) or when the run exceeds the cycle ceiling.
SimReport run_simulation(const SnakeLayout& layout, const LinkSelection& selection,
                         const RoutingTables& tables, const std::vector<Packet>& trace,
                         const SimConfig& cfg);

// Relative crossbar area, proportional to the port-count product.
double crossbar_area_units(int n_in, int n_out);

// Analytic walk of the routing tables for one source-destination pair;
// the idle-network oracle for the simulator.
struct PathSummary {
    int mesh_hops = 0;
    std::vector<int> photonic_links;
    double cost = 0.0;
};
PathSummary walk_path(const RoutingTables& tables, const SnakeLayout& layout,
                      const LinkSelection& selection, const CostModel& cost, int src, int dst);

} // namespace snoc

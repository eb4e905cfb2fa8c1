#pragma once

#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include "snoc/topology.hpp"

namespace snoc {

// One packet of a trace. The trace file format is plain text, one packet
// per line: "<injection_cycle> <src_router> <dst_router> <size_flits>",
// with '#' starting a comment.
struct Packet {
    long long id = 0;
    long long injection_cycle = 0;
    int src = 0;
    int dst = 0;
    int size_flits = 1;
};

// Communication volume (flits) between every source-destination pair.
struct TrafficMatrix {
    int n = 0;
    std::vector<double> volume;

    TrafficMatrix() = default;
    explicit TrafficMatrix(int routers) : n(routers), volume(static_cast<size_t>(routers) * routers, 0.0) {}

    double& at(int src, int dst) { return volume[static_cast<size_t>(src) * n + dst]; }
    double at(int src, int dst) const { return volume[static_cast<size_t>(src) * n + dst]; }
    double total() const;

    static TrafficMatrix from_csv(std::istream& in, int routers);
    void to_csv(std::ostream& os) const;
};

enum class PatternKind { Fcp, Mfm, Uniform, NearestNeighbor, Transpose };
enum class Placement { None, Side, Center, Corner };

PatternKind pattern_kind_from_string(const std::string& s);
Placement placement_from_string(const std::string& s);
std::string pattern_name(PatternKind kind, Placement placement);

// Synthetic pattern description. Packet injections are Bernoulli per cycle
// per source at `injection_rate` flits/node/cycle, seeded and reproducible.
//
// FCP: `pair_count` long-range node pairs anchored at the mesh side or
// center exchange `pair_share` of the traffic; the rest is uniform
// background. MFM: every non-memory node sends requests to a small memory
// node set (side / center / corner placement) which answers each request
// with a reply after `reply_delay_cycles`.
struct PatternSpec {
    PatternKind kind = PatternKind::Uniform;
    Placement placement = Placement::None;
    int pair_count = 4; // FCP pairs or MFM memory nodes
    double injection_rate = 0.1;
    long long duration_cycles = 2000;
    unsigned long long seed = 1;
    int packet_size_flits = 4;
    int request_size_flits = 1;
    int reply_size_flits = 4;
    long long reply_delay_cycles = 20;
    double pair_share = 0.9;

    std::string name() const { return pattern_name(kind, placement); }
    void validate(const MeshSpec& mesh) const;
};

// Deterministic trace generation; identical (spec, seed) inputs produce
// byte-identical trace files.
std::vector<Packet> generate_trace(const PatternSpec& spec, const MeshSpec& mesh);

void write_trace(std::ostream& os, const std::vector<Packet>& trace);

// Throws ParseError with the offending line number; never skips silently.
std::vector<Packet> parse_trace(std::istream& in);
std::vector<Packet> load_trace_file(const std::string& path);

TrafficMatrix trace_to_matrix(const std::vector<Packet>& trace, int routers);

// Memory node ids for an MFM placement on the given mesh.
std::vector<int> mfm_memory_nodes(const MeshSpec& mesh, Placement placement, int count);
// Communicating pairs for an FCP placement.
std::vector<std::pair<int, int>> fcp_pairs(const MeshSpec& mesh, Placement placement, int count);

} // namespace snoc

#include "snoc/traffic.hpp"

#include <algorithm>
#include <fstream>
#include <random>
#include <sstream>

#include "snoc/error.hpp"

namespace snoc {

double TrafficMatrix::total() const {
    double t = 0.0;
    for (double v : volume) t += v;
    return t;
}

TrafficMatrix TrafficMatrix::from_csv(std::istream& in, int routers) {
    TrafficMatrix m(routers);
    std::string line;
    long long lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string t = line;
        size_t hash = t.find('#');
        if (hash != std::string::npos) t = t.substr(0, hash);
        if (t.find_first_not_of(" \t\r\n") == std::string::npos) continue;
        if (lineno == 1 && t.find("src") != std::string::npos) continue; // header
        std::replace(t.begin(), t.end(), ',', ' ');
        std::istringstream ss(t);
        long long src, dst;
        double vol;
        if (!(ss >> src >> dst >> vol)) throw ParseError("expected 'src,dst,volume'", lineno);
        if (src < 0 || src >= routers || dst < 0 || dst >= routers)
            throw ParseError("router id out of range", lineno);
        if (vol < 0) throw ParseError("negative volume", lineno);
        m.at(static_cast<int>(src), static_cast<int>(dst)) += vol;
    }
    return m;
}

void TrafficMatrix::to_csv(std::ostream& os) const {
    os << "src,dst,volume\n";
    for (int s = 0; s < n; ++s)
        for (int d = 0; d < n; ++d)
            if (at(s, d) > 0.0) os << s << ',' << d << ',' << at(s, d) << '\n';
}

PatternKind pattern_kind_from_string(const std::string& s) {
    if (s == "fcp") return PatternKind::Fcp;
    if (s == "mfm") return PatternKind::Mfm;
    if (s == "uniform") return PatternKind::Uniform;
    if (s == "nearest-neighbor" || s == "nearest_neighbor") return PatternKind::NearestNeighbor;
    if (s == "transpose") return PatternKind::Transpose;
    throw ConfigError("unknown traffic pattern kind: " + s);
}

Placement placement_from_string(const std::string& s) {
    if (s.empty() || s == "none") return Placement::None;
    if (s == "side") return Placement::Side;
    if (s == "center") return Placement::Center;
    if (s == "corner") return Placement::Corner;
    throw ConfigError("unknown placement: " + s);
}

std::string pattern_name(PatternKind kind, Placement placement) {
    std::string base;
    switch (kind) {
    case PatternKind::Fcp: base = "fcp"; break;
    case PatternKind::Mfm: base = "mfm"; break;
    case PatternKind::Uniform: return "uniform";
    case PatternKind::NearestNeighbor: return "nearest-neighbor";
    case PatternKind::Transpose: return "transpose";
    }
    switch (placement) {
    case Placement::Side: return base + "-side";
    case Placement::Center: return base + "-center";
    case Placement::Corner: return base + "-corner";
    case Placement::None: return base;
    }
    return base;
}

void PatternSpec::validate(const MeshSpec& mesh) const {
    mesh.validate();
    if (injection_rate <= 0.0 || injection_rate > 1.0)
        throw ConfigError("injection rate must be in (0, 1]");
    if (duration_cycles < 0) throw ConfigError("duration must be >= 0");
    if (packet_size_flits < 1 || request_size_flits < 1 || reply_size_flits < 1)
        throw ConfigError("packet sizes must be >= 1 flit");
    switch (kind) {
    case PatternKind::Fcp:
        if (placement != Placement::Side && placement != Placement::Center)
            throw ConfigError("fcp supports side or center placement");
        if (mesh.width < 4 || mesh.height < 4)
            throw ConfigError("fcp placement needs a mesh of at least 4x4");
        if (pair_count < 1 || pair_count > mesh.height)
            throw ConfigError("fcp pair count out of range for this mesh");
        break;
    case PatternKind::Mfm:
        if (placement == Placement::None)
            throw ConfigError("mfm needs a side, center or corner placement");
        if (mesh.width < 4 || mesh.height < 4)
            throw ConfigError("mfm placement needs a mesh of at least 4x4");
        if (pair_count < 1 || pair_count > 4)
            throw ConfigError("mfm memory node count must be in [1, 4]");
        break;
    case PatternKind::Transpose:
        if (mesh.width != mesh.height) throw ConfigError("transpose needs a square mesh");
        [[fallthrough]];
    default:
        if (placement != Placement::None)
            throw ConfigError("placement only applies to fcp and mfm patterns");
        break;
    }
}

std::vector<int> mfm_memory_nodes(const MeshSpec& mesh, Placement placement, int count) {
    std::vector<int> nodes;
    switch (placement) {
    case Placement::Side: {
        int y0 = mesh.height / 2 - count / 2;
        for (int i = 0; i < count; ++i) nodes.push_back(mesh.id_of(0, y0 + i));
        break;
    }
    case Placement::Center: {
        int cx = mesh.width / 2 - 1, cy = mesh.height / 2 - 1;
        const int dx[] = {0, 1, 0, 1}, dy[] = {0, 0, 1, 1};
        for (int i = 0; i < count; ++i) nodes.push_back(mesh.id_of(cx + dx[i], cy + dy[i]));
        break;
    }
    case Placement::Corner: {
        const int dx[] = {0, 1, 0, 1}, dy[] = {0, 0, 1, 1};
        for (int i = 0; i < count; ++i) nodes.push_back(mesh.id_of(dx[i], dy[i]));
        break;
    }
    case Placement::None:
        throw ConfigError("memory placement required");
    }
    return nodes;
}

std::vector<std::pair<int, int>> fcp_pairs(const MeshSpec& mesh, Placement placement, int count) {
    std::vector<std::pair<int, int>> pairs;
    int w = mesh.width, h = mesh.height;
    if (placement == Placement::Side) {
        // Row-spanning pairs along the top and bottom edges.
        std::vector<int> rows;
        for (int i = 0; static_cast<int>(rows.size()) < count; ++i) {
            rows.push_back(i % 2 == 0 ? i / 2 : h - 1 - i / 2);
        }
        for (int r : rows) pairs.emplace_back(mesh.id_of(0, r), mesh.id_of(w - 1, r));
    } else {
        // Long diagonals through the chip center.
        std::vector<std::pair<int, int>> all = {
            {mesh.id_of(0, 0), mesh.id_of(w - 1, h - 1)},
            {mesh.id_of(w - 1, 0), mesh.id_of(0, h - 1)},
            {mesh.id_of(1, 2), mesh.id_of(w - 2, h - 3)},
            {mesh.id_of(2, 1), mesh.id_of(w - 3, h - 2)},
            {mesh.id_of(0, 2), mesh.id_of(w - 1, h - 3)},
            {mesh.id_of(2, 0), mesh.id_of(w - 3, h - 1)},
        };
        for (int i = 0; i < count; ++i) pairs.push_back(all[i % all.size()]);
    }
    return pairs;
}

namespace {

// One RNG stream, consumed in a fixed (cycle, source) order.
struct Rng {
    std::mt19937_64 gen;
    explicit Rng(unsigned long long seed) : gen(seed) {}
    bool bernoulli(double p) {
        return std::uniform_real_distribution<double>(0.0, 1.0)(gen) < p;
    }
    int uniform_int(int lo, int hi) { // inclusive
        return std::uniform_int_distribution<int>(lo, hi)(gen);
    }
};

int uniform_other(Rng& rng, int n, int self) {
    int d = rng.uniform_int(0, n - 2);
    return d >= self ? d + 1 : d;
}

} // namespace

std::vector<Packet> generate_trace(const PatternSpec& spec, const MeshSpec& mesh) {
    spec.validate(mesh);
    Rng rng(spec.seed);
    int n = mesh.router_count();
    std::vector<Packet> trace;
    long long next_id = 0;

    auto emit = [&](long long cycle, int src, int dst, int size) {
        trace.push_back(Packet{next_id++, cycle, src, dst, size});
    };

    switch (spec.kind) {
    case PatternKind::Uniform: {
        double p = spec.injection_rate / spec.packet_size_flits;
        for (long long c = 0; c < spec.duration_cycles; ++c)
            for (int s = 0; s < n; ++s)
                if (rng.bernoulli(p)) emit(c, s, uniform_other(rng, n, s), spec.packet_size_flits);
        break;
    }
    case PatternKind::NearestNeighbor: {
        double p = spec.injection_rate / spec.packet_size_flits;
        for (long long c = 0; c < spec.duration_cycles; ++c)
            for (int s = 0; s < n; ++s) {
                if (!rng.bernoulli(p)) continue;
                int x = mesh.x_of(s), y = mesh.y_of(s);
                int neighbors[4];
                int count = 0;
                if (x > 0) neighbors[count++] = mesh.id_of(x - 1, y);
                if (x < mesh.width - 1) neighbors[count++] = mesh.id_of(x + 1, y);
                if (y > 0) neighbors[count++] = mesh.id_of(x, y - 1);
                if (y < mesh.height - 1) neighbors[count++] = mesh.id_of(x, y + 1);
                emit(c, s, neighbors[rng.uniform_int(0, count - 1)], spec.packet_size_flits);
            }
        break;
    }
    case PatternKind::Transpose: {
        double p = spec.injection_rate / spec.packet_size_flits;
        for (long long c = 0; c < spec.duration_cycles; ++c)
            for (int s = 0; s < n; ++s) {
                int dst = mesh.id_of(mesh.y_of(s), mesh.x_of(s));
                if (dst == s) continue; // diagonal nodes stay silent
                if (rng.bernoulli(p)) emit(c, s, dst, spec.packet_size_flits);
            }
        break;
    }
    case PatternKind::Fcp: {
        auto pairs = fcp_pairs(mesh, spec.placement, spec.pair_count);
        std::vector<int> partner(n, -1);
        for (auto [a, b] : pairs) {
            partner[a] = b;
            partner[b] = a;
        }
        double p_pair = spec.injection_rate / spec.packet_size_flits;
        // Background rate sized so the pairs carry `pair_share` of the flits.
        double bg_volume_ratio = (1.0 - spec.pair_share) / spec.pair_share;
        double p_bg = p_pair * bg_volume_ratio * (2.0 * pairs.size()) / n;
        for (long long c = 0; c < spec.duration_cycles; ++c)
            for (int s = 0; s < n; ++s) {
                if (partner[s] >= 0 && rng.bernoulli(p_pair))
                    emit(c, s, partner[s], spec.packet_size_flits);
                if (rng.bernoulli(p_bg)) emit(c, s, uniform_other(rng, n, s), spec.packet_size_flits);
            }
        break;
    }
    case PatternKind::Mfm: {
        auto memory = mfm_memory_nodes(mesh, spec.placement, spec.pair_count);
        std::vector<bool> is_memory(n, false);
        for (int m : memory) is_memory[m] = true;
        double p = spec.injection_rate / spec.request_size_flits;
        std::vector<Packet> replies;
        for (long long c = 0; c < spec.duration_cycles; ++c)
            for (int s = 0; s < n; ++s) {
                if (is_memory[s]) continue;
                if (!rng.bernoulli(p)) continue;
                int m = memory[rng.uniform_int(0, static_cast<int>(memory.size()) - 1)];
                emit(c, s, m, spec.request_size_flits);
                replies.push_back(
                    Packet{0, c + spec.reply_delay_cycles, m, s, spec.reply_size_flits});
            }
        for (auto& r : replies) {
            r.id = next_id++;
            trace.push_back(r);
        }
        break;
    }
    }

    std::stable_sort(trace.begin(), trace.end(), [](const Packet& a, const Packet& b) {
        return a.injection_cycle < b.injection_cycle;
    });
    for (size_t i = 0; i < trace.size(); ++i) trace[i].id = static_cast<long long>(i);
    return trace;
}

void write_trace(std::ostream& os, const std::vector<Packet>& trace) {
    os << "# cycle src dst size_flits\n";
    for (const auto& p : trace)
        os << p.injection_cycle << ' ' << p.src << ' ' << p.dst << ' ' << p.size_flits << '\n';
}

std::vector<Packet> parse_trace(std::istream& in) {
    std::vector<Packet> trace;
    std::string line;
    long long lineno = 0;
    long long next_id = 0;
    while (std::getline(in, line)) {
        ++lineno;
        size_t hash = line.find('#');
        std::string t = hash == std::string::npos ? line : line.substr(0, hash);
        if (t.find_first_not_of(" \t\r\n") == std::string::npos) continue;
        std::istringstream ss(t);
        long long cycle, src, dst, size;
        if (!(ss >> cycle >> src >> dst >> size))
            throw ParseError("expected '<cycle> <src> <dst> <size_flits>'", lineno);
        std::string extra;
        if (ss >> extra) throw ParseError("trailing tokens after packet fields", lineno);
        if (cycle < 0) throw ParseError("negative injection cycle", lineno);
        if (size < 1) throw ParseError("packet size must be >= 1 flit", lineno);
        trace.push_back(Packet{next_id++, cycle, static_cast<int>(src), static_cast<int>(dst),
                               static_cast<int>(size)});
    }
    return trace;
}

std::vector<Packet> load_trace_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open trace file: " + path);
    return parse_trace(in);
}

TrafficMatrix trace_to_matrix(const std::vector<Packet>& trace, int routers) {
    TrafficMatrix m(routers);
    for (const auto& p : trace) {
        if (p.src < 0 || p.src >= routers || p.dst < 0 || p.dst >= routers)
            throw ConfigError("trace references router outside the mesh");
        m.at(p.src, p.dst) += p.size_flits;
    }
    return m;
}

} // namespace snoc

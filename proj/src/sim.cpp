#include "snoc/sim.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <deque>
#include <iomanip>

#include "snoc/error.hpp"

namespace snoc {

void SimConfig::validate() const {
    if (clock_hz <= 0) throw ConfigError("clock must be > 0");
    if (elec_hop_cycles < 1 || photonic_ingress_cycles < 1 || photonic_flight_cycles < 1 ||
        photonic_egress_cycles < 1)
        throw ConfigError("cycle counts must be >= 1");
    if (flit_size_bits < 1) throw ConfigError("flit size must be >= 1 bit");
    if (vc_buffer_depth < 1) throw ConfigError("VC buffer depth must be >= 1 flit");
    if (warmup_cycles < 0 || max_cycles < 0) throw ConfigError("cycle limits must be >= 0");
}

SimConfig SimConfig::from_config(const KeyValueConfig& cfg) {
    SimConfig c;
    c.clock_hz = cfg.get_double("sim.clock_hz", c.clock_hz);
    c.elec_hop_cycles = static_cast<int>(cfg.get_int("sim.elec_hop_cycles", c.elec_hop_cycles));
    c.photonic_ingress_cycles =
        static_cast<int>(cfg.get_int("sim.photonic_ingress_cycles", c.photonic_ingress_cycles));
    c.photonic_flight_cycles =
        static_cast<int>(cfg.get_int("sim.photonic_flight_cycles", c.photonic_flight_cycles));
    c.photonic_egress_cycles =
        static_cast<int>(cfg.get_int("sim.photonic_egress_cycles", c.photonic_egress_cycles));
    c.flit_size_bits = static_cast<int>(cfg.get_int("sim.flit_size_bits", c.flit_size_bits));
    c.vc_buffer_depth = static_cast<int>(cfg.get_int("sim.vc_buffer_depth", c.vc_buffer_depth));
    c.warmup_cycles = cfg.get_int("sim.warmup_cycles", c.warmup_cycles);
    c.max_cycles = cfg.get_int("sim.max_cycles", c.max_cycles);
    c.validate();
    return c;
}

double crossbar_area_units(int n_in, int n_out) {
    if (n_in <= 0 || n_out <= 0) throw ConfigError("crossbar port counts must be > 0");
    return static_cast<double>(n_in) * n_out;
}

namespace {

constexpr int kVc0 = 0, kVc1 = 1, kVc2 = 2, kVc3 = 3;
constexpr int kNumPorts = 5;
// Per-port arbitration ring over the main-crossbar VCs (VC2 uses the
// add-on crossbar instead).
constexpr std::array<int, 3> kMainVcRing = {kVc0, kVc1, kVc3};

struct Flit {
    int pkt = -1;
    int seq = 0;
    bool head = false;
    bool tail = false;
    bool post = false;          // has crossed a logical link
    long long available = 0;    // first cycle this flit can arbitrate
};

struct Buffer {
    std::deque<Flit> q;
    int owner = -1; // packet currently holding this VC
    // Route the head flit took; body flits follow it.
    bool route_valid = false;
    int route_out_port = -1;
    int route_vc = -1;
    bool route_eject = false;
};

struct LinkState {
    int index = 0;
    int src = 0, dst = 0, in_slot = 0;
    int in_flight = 0;
    std::deque<std::pair<long long, Flit>> pipe; // (arrival commit cycle, flit)
};

struct RouterState {
    std::array<std::array<Buffer, 4>, kNumPorts> in;
    std::vector<Buffer> opt_in;      // receive queues, by in-slot
    std::vector<int> out_links;      // activated link indices, by out-slot
    std::array<int, kNumPorts> rr_vc{};      // per input port, index into kMainVcRing
    std::array<int, kNumPorts> rr_out{};     // per output port, over 5 + opt requesters
    std::vector<int> rr_addon;               // per out-slot, over the 5 ports
};

struct PacketState {
    Packet p;
    int flits_sent = 0;
    int flits_ejected = 0;
    long long eject_cycle = -1;
    int inject_vc = -1; // VC at the source local port while streaming
};

struct SourceState {
    std::deque<int> queue; // packet indices in injection order
};

enum class MoveKind { None, Eject, Mesh };

struct ResolvedMove {
    MoveKind kind = MoveKind::None;
    int out_port = -1;
    int target_vc = -1;
};

class Simulator {
public:
    Simulator(const SnakeLayout& layout, const LinkSelection& selection,
              const RoutingTables& tables, const std::vector<Packet>& trace, const SimConfig& cfg)
        : layout_(layout), mesh_(layout.mesh), sel_(selection), tables_(tables), cfg_(cfg) {
        cfg.validate();
        n_ = mesh_.router_count();
        if (tables.n != n_) throw SimError("routing tables do not cover this mesh");
        routers_.resize(n_);
        for (size_t li = 0; li < sel_.links.size(); ++li) {
            const auto& l = sel_.links[li];
            LinkState ls;
            ls.index = static_cast<int>(li);
            ls.src = l.src;
            ls.dst = l.dst;
            ls.in_slot = l.in_slot;
            links_.push_back(ls);
            RouterState& rs = routers_[l.src];
            if (static_cast<int>(rs.out_links.size()) <= l.out_slot)
                rs.out_links.resize(l.out_slot + 1, -1);
            rs.out_links[l.out_slot] = static_cast<int>(li);
            RouterState& rd = routers_[l.dst];
            if (static_cast<int>(rd.opt_in.size()) <= l.in_slot)
                rd.opt_in.resize(l.in_slot + 1);
        }
        for (auto& r : routers_) r.rr_addon.assign(r.out_links.size(), 0);

        sources_.resize(n_);
        packets_.reserve(trace.size());
        for (const auto& p : trace) {
            if (p.src < 0 || p.src >= n_ || p.dst < 0 || p.dst >= n_)
                throw SimError("trace references a router outside the mesh: packet " +
                               std::to_string(p.id));
            if (p.src == p.dst)
                throw SimError("loopback packet rejected at ingestion: packet " +
                               std::to_string(p.id));
            if (p.size_flits < 1)
                throw SimError("packet size must be >= 1 flit: packet " + std::to_string(p.id));
            packets_.push_back(PacketState{p, 0, 0, -1, -1});
        }
        // Stable injection order per source (by cycle, then trace order).
        std::vector<int> order(packets_.size());
        for (size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
        std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
            return packets_[a].p.injection_cycle < packets_[b].p.injection_cycle;
        });
        for (int idx : order) sources_[packets_[idx].p.src].queue.push_back(idx);

        report_.photonic_link_flits.assign(sel_.links.size(), 0);
        report_.packets_injected = static_cast<long long>(packets_.size());
    }

    SimReport run() {
        long long last_injection = 0;
        for (const auto& ps : packets_)
            last_injection = std::max(last_injection, ps.p.injection_cycle);
        long long ceiling =
            cfg_.max_cycles > 0 ? cfg_.max_cycles : last_injection + 1'000'000;

        long long ejected_packets = 0;
        long long now = 0;
        long long last_event_cycle = 0;
        while (ejected_packets < static_cast<long long>(packets_.size())) {
            if (now > ceiling)
                throw SimError("simulation did not drain within " + std::to_string(ceiling) +
                               " cycles (livelock ceiling)");
            inject(now);
            decide(now);
            ejected_packets += commit(now, last_event_cycle);
            ++now;
        }
        finalize(last_event_cycle);
        return report_;
    }

private:
    int neighbor(int r, int port) const {
        int x = mesh_.x_of(r), y = mesh_.y_of(r);
        switch (port) {
        case kPortNorth: return mesh_.id_of(x, y - 1);
        case kPortEast: return mesh_.id_of(x + 1, y);
        case kPortSouth: return mesh_.id_of(x, y + 1);
        case kPortWest: return mesh_.id_of(x - 1, y);
        default: return -1;
        }
    }
    static int opposite(int port) { return (port + 2) % 4; }

    bool regular_vc_allocatable(const Buffer& b, const Flit& f) const {
        if (f.head) return b.owner < 0 && static_cast<int>(b.q.size()) < cfg_.vc_buffer_depth;
        return b.owner == f.pkt && static_cast<int>(b.q.size()) < cfg_.vc_buffer_depth;
    }

    // Route the head flit of a main-crossbar buffer. Body flits replay the
    // stored route.
    ResolvedMove resolve(int router, const Buffer& buf, const Flit& f) const {
        ResolvedMove mv;
        if (!f.head && buf.route_valid) {
            if (buf.route_eject) {
                mv.kind = MoveKind::Eject;
                return mv;
            }
            mv.kind = MoveKind::Mesh;
            mv.out_port = buf.route_out_port;
            mv.target_vc = buf.route_vc;
            const Buffer& target = routers_[neighbor(router, mv.out_port)]
                                       .in[opposite(mv.out_port)][mv.target_vc];
            if (!regular_vc_allocatable(target, f)) mv.kind = MoveKind::None;
            return mv;
        }
        int dest = packets_[f.pkt].p.dst;
        if (router == dest) {
            mv.kind = MoveKind::Eject;
            return mv;
        }
        int out_port;
        int target_class;
        if (f.post) {
            out_port = xy_next_port(mesh_, router, dest);
            target_class = kVc3;
        } else {
            const auto& entry = tables_.at(router, dest);
            if (entry.action != RoutingTables::Action::Mesh) return mv; // photonic handled at the add-on crossbar
            out_port = entry.port;
            int next = neighbor(router, out_port);
            target_class =
                tables_.at(next, dest).action == RoutingTables::Action::Photonic ? kVc2 : kVc0;
        }
        int next = neighbor(router, out_port);
        const RouterState& nr = routers_[next];
        int in_port = opposite(out_port);
        if (target_class == kVc0) {
            for (int vc : {kVc0, kVc1}) {
                if (regular_vc_allocatable(nr.in[in_port][vc], f)) {
                    mv.kind = MoveKind::Mesh;
                    mv.out_port = out_port;
                    mv.target_vc = vc;
                    return mv;
                }
            }
            return mv;
        }
        if (regular_vc_allocatable(nr.in[in_port][target_class], f)) {
            mv.kind = MoveKind::Mesh;
            mv.out_port = out_port;
            mv.target_vc = target_class;
        }
        return mv;
    }

    void inject(long long now) {
        for (int r = 0; r < n_; ++r) {
            SourceState& src = sources_[r];
            if (src.queue.empty()) continue;
            PacketState& ps = packets_[src.queue.front()];
            if (ps.p.injection_cycle > now) continue;
            Flit f;
            f.pkt = src.queue.front();
            f.seq = ps.flits_sent;
            f.head = ps.flits_sent == 0;
            f.tail = ps.flits_sent == ps.p.size_flits - 1;
            f.post = false;
            f.available = now;
            const auto& entry = tables_.at(r, ps.p.dst);
            int vc = -1;
            if (f.head) {
                if (entry.action == RoutingTables::Action::Photonic) {
                    if (regular_vc_allocatable(routers_[r].in[kPortLocal][kVc2], f)) vc = kVc2;
                } else {
                    for (int c : {kVc0, kVc1})
                        if (regular_vc_allocatable(routers_[r].in[kPortLocal][c], f)) {
                            vc = c;
                            break;
                        }
                }
            } else {
                vc = ps.inject_vc;
                if (vc < 0 || !regular_vc_allocatable(routers_[r].in[kPortLocal][vc], f)) vc = -1;
            }
            if (vc < 0) continue; // source queue stalls, later injections shift
            Buffer& b = routers_[r].in[kPortLocal][vc];
            if (f.head) b.owner = f.pkt;
            b.q.push_back(f);
            audit_enqueue(r, vc, f);
            ps.inject_vc = vc;
            ++ps.flits_sent;
            if (f.tail) src.queue.pop_front();
        }
    }

    struct AddonGrant {
        int router, port, slot;
    };
    struct MainGrant {
        int router;
        bool from_opt = false;
        int port_or_slot = 0;
        int vc = 0;
        ResolvedMove mv;
    };

    void decide(long long now) {
        addon_grants_.clear();
        main_grants_.clear();
        for (int r = 0; r < n_; ++r) {
            RouterState& rs = routers_[r];
            // Add-on crossbar: staged VC2 flits onto their logical links.
            for (size_t slot = 0; slot < rs.out_links.size(); ++slot) {
                int li = rs.out_links[slot];
                if (li < 0) continue;
                LinkState& link = links_[li];
                const Buffer& rq = routers_[link.dst].opt_in[link.in_slot];
                std::array<bool, kNumPorts> wants{};
                bool any = false;
                for (int p = 0; p < kNumPorts; ++p) {
                    const Buffer& b = rs.in[p][kVc2];
                    if (b.q.empty() || b.q.front().available > now) continue;
                    const Flit& f = b.q.front();
                    const auto& entry = tables_.at(r, packets_[f.pkt].p.dst);
                    if (entry.action != RoutingTables::Action::Photonic || entry.link != li)
                        continue;
                    if (static_cast<int>(rq.q.size()) + link.in_flight >= cfg_.vc_buffer_depth)
                        continue;
                    if (f.head ? rq.owner >= 0 : rq.owner != f.pkt) continue;
                    wants[p] = true;
                    any = true;
                }
                if (!any) continue;
                int& ptr = rs.rr_addon[slot];
                for (int k = 0; k < kNumPorts; ++k) {
                    int p = (ptr + k) % kNumPorts;
                    if (wants[p]) {
                        addon_grants_.push_back(AddonGrant{r, p, static_cast<int>(slot)});
                        ptr = (p + 1) % kNumPorts;
                        break;
                    }
                }
            }
            // Main crossbar: per input port one VC among {0, 1, 3}, plus the
            // optical receive queues as extra requesters.
            int total_requesters = kNumPorts + static_cast<int>(rs.opt_in.size());
            std::vector<MainGrant> reqs;
            std::vector<int> req_of_requester(total_requesters, -1);
            for (int p = 0; p < kNumPorts; ++p) {
                int& ptr = rs.rr_vc[p];
                for (int k = 0; k < static_cast<int>(kMainVcRing.size()); ++k) {
                    int vc = kMainVcRing[(ptr + k) % kMainVcRing.size()];
                    const Buffer& b = rs.in[p][vc];
                    if (b.q.empty() || b.q.front().available > now) continue;
                    ResolvedMove mv = resolve(r, b, b.q.front());
                    if (mv.kind == MoveKind::None) continue;
                    MainGrant g;
                    g.router = r;
                    g.from_opt = false;
                    g.port_or_slot = p;
                    g.vc = vc;
                    g.mv = mv;
                    req_of_requester[p] = static_cast<int>(reqs.size());
                    reqs.push_back(g);
                    break;
                }
            }
            for (size_t oq = 0; oq < rs.opt_in.size(); ++oq) {
                const Buffer& b = rs.opt_in[oq];
                if (b.q.empty() || b.q.front().available > now) continue;
                ResolvedMove mv = resolve(r, b, b.q.front());
                if (mv.kind == MoveKind::None) continue;
                MainGrant g;
                g.router = r;
                g.from_opt = true;
                g.port_or_slot = static_cast<int>(oq);
                g.mv = mv;
                req_of_requester[kNumPorts + oq] = static_cast<int>(reqs.size());
                reqs.push_back(g);
            }
            // One grant per output port (ejection uses the local port).
            for (int out = 0; out < kNumPorts; ++out) {
                int& ptr = rs.rr_out[out];
                for (int k = 0; k < total_requesters; ++k) {
                    int requester = (ptr + k) % total_requesters;
                    int ri = req_of_requester[requester];
                    if (ri < 0) continue;
                    const MainGrant& g = reqs[ri];
                    int wanted = g.mv.kind == MoveKind::Eject ? kPortLocal : g.mv.out_port;
                    if (wanted != out) continue;
                    main_grants_.push_back(g);
                    // Advance the port's VC ring only when its pick moves.
                    if (!g.from_opt) {
                        for (int idx = 0; idx < static_cast<int>(kMainVcRing.size()); ++idx)
                            if (kMainVcRing[idx] == g.vc)
                                rs.rr_vc[g.port_or_slot] = (idx + 1) % kMainVcRing.size();
                    }
                    ptr = (requester + 1) % total_requesters;
                    break;
                }
            }
        }
    }

    long long commit(long long now, long long& last_event_cycle) {
        // Optical arrivals scheduled for this cycle.
        for (auto& link : links_) {
            while (!link.pipe.empty() && link.pipe.front().first <= now) {
                Flit f = link.pipe.front().second;
                link.pipe.pop_front();
                --link.in_flight;
                f.available = now + 1;
                Buffer& rq = routers_[link.dst].opt_in[link.in_slot];
                if (f.head) rq.owner = f.pkt;
                rq.q.push_back(f);
                audit_opt_enqueue(f);
            }
        }
        // Launches through the add-on crossbars.
        for (const auto& g : addon_grants_) {
            RouterState& rs = routers_[g.router];
            Buffer& b = rs.in[g.port][kVc2];
            Flit f = b.q.front();
            b.q.pop_front();
            if (f.tail) b.owner = -1;
            int li = rs.out_links[g.slot];
            LinkState& link = links_[li];
            if (f.head) routers_[link.dst].opt_in[link.in_slot].owner = f.pkt;
            f.post = true;
            long long arrival = now + cfg_.photonic_edge_cycles() - 1;
            link.pipe.emplace_back(arrival, f);
            ++link.in_flight;
            ++report_.photonic_link_flits[li];
            ++report_.photonic_flits;
            report_.photonic_bits += cfg_.flit_size_bits;
            last_event_cycle = std::max(last_event_cycle, arrival + 1);
        }
        // Main-crossbar moves and ejections.
        long long newly_done = 0;
        for (const auto& g : main_grants_) {
            RouterState& rs = routers_[g.router];
            Buffer& b = g.from_opt ? rs.opt_in[g.port_or_slot] : rs.in[g.port_or_slot][g.vc];
            Flit f = b.q.front();
            b.q.pop_front();
            if (f.head && !f.tail) {
                b.route_valid = true;
                b.route_eject = g.mv.kind == MoveKind::Eject;
                b.route_out_port = g.mv.out_port;
                b.route_vc = g.mv.target_vc;
            }
            if (f.tail) {
                b.owner = -1;
                b.route_valid = false;
            }
            if (g.mv.kind == MoveKind::Eject) {
                PacketState& ps = packets_[f.pkt];
                ++ps.flits_ejected;
                last_event_cycle = std::max(last_event_cycle, now + 1);
                if (f.tail) {
                    ps.eject_cycle = now + 1;
                    ++newly_done;
                }
            } else {
                int next = neighbor(g.router, g.mv.out_port);
                Buffer& target = routers_[next].in[opposite(g.mv.out_port)][g.mv.target_vc];
                if (f.head) target.owner = f.pkt;
                f.available = now + cfg_.elec_hop_cycles;
                target.q.push_back(f);
                audit_enqueue(next, g.mv.target_vc, f);
                ++report_.router_traversals;
                ++report_.link_traversals;
                report_.link_mm += mesh_.hop_length_mm;
                last_event_cycle = std::max(last_event_cycle, f.available);
            }
        }
        return newly_done;
    }

    void audit_enqueue(int /*router*/, int vc, const Flit& f) {
        bool ok = true;
        if (vc == kVc0 || vc == kVc1) ok = !f.post;
        if (vc == kVc2) ok = !f.post;
        if (vc == kVc3) ok = f.post;
        if (!ok) ++report_.vc_role_violations;
    }
    void audit_opt_enqueue(const Flit& f) {
        if (!f.post) ++report_.vc_role_violations;
    }

    void finalize(long long last_event_cycle) {
        report_.cycles = last_event_cycle;
        report_.packets.reserve(packets_.size());
        std::vector<long long> measured;
        for (const auto& ps : packets_) {
            PacketRecord rec;
            rec.id = ps.p.id;
            rec.src = ps.p.src;
            rec.dst = ps.p.dst;
            rec.size_flits = ps.p.size_flits;
            rec.injected = ps.p.injection_cycle;
            rec.ejected = ps.eject_cycle;
            rec.latency = ps.eject_cycle - ps.p.injection_cycle;
            rec.measured = ps.p.injection_cycle >= cfg_.warmup_cycles;
            if (rec.measured) measured.push_back(rec.latency);
            report_.packets.push_back(rec);
            ++report_.packets_ejected;
        }
        if (!measured.empty()) {
            std::sort(measured.begin(), measured.end());
            double sum = 0.0;
            for (long long v : measured) sum += static_cast<double>(v);
            report_.mean_latency = sum / measured.size();
            auto pct = [&](double q) {
                size_t idx = static_cast<size_t>(std::ceil(q * measured.size()));
                return static_cast<double>(measured[std::min(measured.size() - 1, idx == 0 ? 0 : idx - 1)]);
            };
            report_.p50_latency = pct(0.50);
            report_.p95_latency = pct(0.95);
            report_.p99_latency = pct(0.99);
            report_.max_latency = measured.back();
        }
    }

    const SnakeLayout& layout_;
    const MeshSpec& mesh_;
    const LinkSelection& sel_;
    const RoutingTables& tables_;
    SimConfig cfg_;
    int n_ = 0;

    std::vector<RouterState> routers_;
    std::vector<LinkState> links_;
    std::vector<PacketState> packets_;
    std::vector<SourceState> sources_;
    std::vector<AddonGrant> addon_grants_;
    std::vector<MainGrant> main_grants_;
    SimReport report_;
};

} // namespace

SimReport run_simulation(const SnakeLayout& layout, const LinkSelection& selection,
                         const RoutingTables& tables, const std::vector<Packet>& trace,
                         const SimConfig& cfg) {
    Simulator sim(layout, selection, tables, trace, cfg);
    return sim.run();
}

PathSummary walk_path(const RoutingTables& tables, const SnakeLayout& layout,
                      const LinkSelection& selection, const CostModel& cost, int src, int dst) {
    PathSummary ps;
    const MeshSpec& mesh = layout.mesh;
    auto step = [&](int node, int port) {
        switch (port) {
        case kPortEast: return node + 1;
        case kPortWest: return node - 1;
        case kPortSouth: return node + mesh.width;
        default: return node - mesh.width;
        }
    };
    int node = src;
    bool post = false;
    int guard = 0;
    const int limit = mesh.router_count() * 4 + 16;
    while (node != dst) {
        if (++guard > limit) throw SimError("routing walk did not reach the destination");
        if (!post && tables.at(node, dst).action == RoutingTables::Action::Photonic) {
            const auto& entry = tables.at(node, dst);
            ps.photonic_links.push_back(entry.link);
            ps.cost += cost.photonic_edge_cycles;
            node = selection.links[entry.link].dst;
            post = true;
            continue;
        }
        int port = post ? xy_next_port(mesh, node, dst) : tables.at(node, dst).port;
        node = step(node, port);
        ++ps.mesh_hops;
        ps.cost += cost.elec_hop_cycles;
    }
    return ps;
}

nlohmann::json SimReport::to_json() const {
    nlohmann::json j;
    j["cycles"] = cycles;
    j["packets_injected"] = packets_injected;
    j["packets_ejected"] = packets_ejected;
    j["mean_latency"] = mean_latency;
    j["p50_latency"] = p50_latency;
    j["p95_latency"] = p95_latency;
    j["p99_latency"] = p99_latency;
    j["max_latency"] = max_latency;
    j["router_traversals"] = router_traversals;
    j["link_traversals"] = link_traversals;
    j["link_mm"] = link_mm;
    j["photonic_flits"] = photonic_flits;
    j["photonic_bits"] = photonic_bits;
    j["photonic_link_flits"] = photonic_link_flits;
    j["vc_role_violations"] = vc_role_violations;
    return j;
}

void SimReport::latencies_to_csv(std::ostream& os) const {
    os << "packet_id,src,dst,size_flits,injected,ejected,latency,measured\n";
    for (const auto& p : packets)
        os << p.id << ',' << p.src << ',' << p.dst << ',' << p.size_flits << ',' << p.injected
           << ',' << p.ejected << ',' << p.latency << ',' << (p.measured ? 1 : 0) << '\n';
}

} // namespace snoc

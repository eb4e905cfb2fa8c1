#include "snoc/selector.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>

#include "snoc/error.hpp"

namespace snoc {

CostModel CostModel::from_config(const KeyValueConfig& cfg) {
    CostModel c;
    c.elec_hop_cycles = cfg.get_double("selection.elec_hop_cycles", c.elec_hop_cycles);
    c.photonic_edge_cycles =
        cfg.get_double("selection.photonic_edge_cycles", c.photonic_edge_cycles);
    c.single_photonic_segment =
        cfg.get_bool("selection.single_photonic_segment", c.single_photonic_segment);
    if (c.elec_hop_cycles <= 0 || c.photonic_edge_cycles <= 0)
        throw ConfigError("hop costs must be > 0");
    return c;
}

int SelectionConstraints::per_snake(int snakes) const {
    validate(snakes);
    return total_links / snakes;
}

void SelectionConstraints::validate(int snakes) const {
    if (total_links <= 0) throw ConfigError("E_tot must be > 0");
    if (links_per_node_per_direction < 1) throw ConfigError("E_node must be >= 1");
    if (snakes <= 0 || total_links % snakes != 0)
        throw ConfigError("E_tot must be divisible by the snake count");
}

SelectionConstraints SelectionConstraints::from_config(const KeyValueConfig& cfg) {
    SelectionConstraints c;
    c.total_links = static_cast<int>(cfg.get_int("selection.total_links", c.total_links));
    c.links_per_node_per_direction = static_cast<int>(
        cfg.get_int("selection.links_per_node_per_direction", c.links_per_node_per_direction));
    return c;
}

int xy_next_port(const MeshSpec& mesh, int node, int target) {
    int nx = mesh.x_of(node), ny = mesh.y_of(node);
    int tx = mesh.x_of(target), ty = mesh.y_of(target);
    if (tx > nx) return kPortEast;
    if (tx < nx) return kPortWest;
    if (ty > ny) return kPortSouth;
    if (ty < ny) return kPortNorth;
    return kPortLocal;
}

namespace {

// Hybrid distances from every source. With the single-segment restriction
// the distance is min over {pure mesh, one logical link}; otherwise a
// Dijkstra over the full hybrid graph.
class HybridDistances {
public:
    HybridDistances(const MeshSpec& mesh, const std::vector<ActivatedLink>& links,
                    const CostModel& cost)
        : mesh_(mesh), cost_(cost) {
        n_ = mesh.router_count();
        if (cost.single_photonic_segment) {
            dist_.assign(static_cast<size_t>(n_) * n_, 0.0);
            for (int s = 0; s < n_; ++s)
                for (int d = 0; d < n_; ++d) {
                    double best = mesh.manhattan(s, d) * cost.elec_hop_cycles;
                    for (const auto& l : links) {
                        double via = mesh.manhattan(s, l.src) * cost.elec_hop_cycles +
                                     cost.photonic_edge_cycles +
                                     mesh.manhattan(l.dst, d) * cost.elec_hop_cycles;
                        best = std::min(best, via);
                    }
                    dist_[static_cast<size_t>(s) * n_ + d] = best;
                }
        } else {
            dist_.assign(static_cast<size_t>(n_) * n_, 0.0);
            for (int s = 0; s < n_; ++s) dijkstra(s, links);
        }
    }

    double at(int s, int d) const { return dist_[static_cast<size_t>(s) * n_ + d]; }

    // Distance if one extra link (u -> v) were added; exact for a single
    // added edge.
    double with_candidate(int s, int d, int u, int v) const {
        return std::min(at(s, d), at(s, u) + cost_.photonic_edge_cycles + at(v, d));
    }

private:
    void dijkstra(int src, const std::vector<ActivatedLink>& links) {
        std::vector<double> dist(n_, std::numeric_limits<double>::infinity());
        using Item = std::pair<double, int>;
        std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
        dist[src] = 0.0;
        pq.emplace(0.0, src);
        std::vector<std::vector<std::pair<int, double>>> adj(n_);
        for (int v = 0; v < n_; ++v) {
            int x = mesh_.x_of(v), y = mesh_.y_of(v);
            if (x > 0) adj[v].emplace_back(mesh_.id_of(x - 1, y), cost_.elec_hop_cycles);
            if (x < mesh_.width - 1) adj[v].emplace_back(mesh_.id_of(x + 1, y), cost_.elec_hop_cycles);
            if (y > 0) adj[v].emplace_back(mesh_.id_of(x, y - 1), cost_.elec_hop_cycles);
            if (y < mesh_.height - 1) adj[v].emplace_back(mesh_.id_of(x, y + 1), cost_.elec_hop_cycles);
        }
        for (const auto& l : links) adj[l.src].emplace_back(l.dst, cost_.photonic_edge_cycles);
        while (!pq.empty()) {
            auto [d, v] = pq.top();
            pq.pop();
            if (d > dist[v]) continue;
            for (auto [w, c] : adj[v]) {
                if (dist[v] + c < dist[w]) {
                    dist[w] = dist[v] + c;
                    pq.emplace(dist[w], w);
                }
            }
        }
        for (int d = 0; d < n_; ++d) dist_[static_cast<size_t>(src) * n_ + d] = dist[d];
    }

    const MeshSpec& mesh_;
    CostModel cost_;
    int n_ = 0;
    std::vector<double> dist_;
};

struct TrafficEntry {
    int src, dst;
    double volume;
};

std::vector<TrafficEntry> nonzero_entries(const TrafficMatrix& traffic) {
    std::vector<TrafficEntry> out;
    for (int s = 0; s < traffic.n; ++s)
        for (int d = 0; d < traffic.n; ++d)
            if (s != d && traffic.at(s, d) > 0.0) out.push_back({s, d, traffic.at(s, d)});
    return out;
}

} // namespace

double base_latency(const MeshSpec& mesh, const TrafficMatrix& traffic, const CostModel& cost) {
    double volume = 0.0, weighted = 0.0;
    for (int s = 0; s < traffic.n; ++s)
        for (int d = 0; d < traffic.n; ++d) {
            double v = traffic.at(s, d);
            if (v <= 0.0 || s == d) continue;
            volume += v;
            weighted += v * mesh.manhattan(s, d) * cost.elec_hop_cycles;
        }
    if (volume <= 0.0) throw ConfigError("traffic matrix carries no volume");
    return weighted / volume;
}

double weighted_latency(const MeshSpec& mesh, const TrafficMatrix& traffic,
                        const std::vector<ActivatedLink>& links, const CostModel& cost) {
    HybridDistances dist(mesh, links, cost);
    double volume = 0.0, weighted = 0.0;
    for (const auto& e : nonzero_entries(traffic)) {
        volume += e.volume;
        weighted += e.volume * dist.at(e.src, e.dst);
    }
    if (volume <= 0.0) throw ConfigError("traffic matrix carries no volume");
    return weighted / volume;
}

double marginal_gain(const LogicalLinkCandidate& candidate, const LinkSelection& selection,
                     const TrafficMatrix& traffic, const SnakeLayout& layout,
                     const CostModel& cost) {
    HybridDistances dist(layout.mesh, selection.links, cost);
    double volume = 0.0, saved = 0.0;
    for (const auto& e : nonzero_entries(traffic)) {
        volume += e.volume;
        double before = dist.at(e.src, e.dst);
        double after = dist.with_candidate(e.src, e.dst, candidate.src, candidate.dst);
        saved += e.volume * (before - after);
    }
    if (volume <= 0.0) return 0.0;
    return saved / volume;
}

LinkSelection select_links(const SnakeLayout& layout, const TrafficMatrix& traffic,
                           const SelectionConstraints& constraints, const CostModel& cost) {
    constraints.validate(layout.snake_count);
    int e_snake = constraints.per_snake(layout.snake_count);
    int n = layout.mesh.router_count();
    if (traffic.n != n) throw ConfigError("traffic matrix dimension does not match the mesh");

    LinkSelection sel;
    sel.per_snake_count.assign(layout.snake_count, 0);
    sel.out_count.assign(n, 0);
    sel.in_count.assign(n, 0);

    std::vector<LogicalLinkCandidate> remaining = candidates(layout);
    std::vector<TrafficEntry> entries = nonzero_entries(traffic);
    if (entries.empty()) return sel; // no traffic, nothing worth activating

    std::vector<double> gains(remaining.size(), 0.0);
    bool rescore = true;
    int total = 0;

    while (!remaining.empty()) {
        if (rescore) {
            HybridDistances dist(layout.mesh, sel.links, cost);
            double volume = 0.0;
            for (const auto& e : entries) volume += e.volume;
            for (size_t i = 0; i < remaining.size(); ++i) {
                double saved = 0.0;
                for (const auto& e : entries) {
                    double before = dist.at(e.src, e.dst);
                    double after =
                        dist.with_candidate(e.src, e.dst, remaining[i].src, remaining[i].dst);
                    saved += e.volume * (before - after);
                }
                gains[i] = saved / volume;
            }
            rescore = false;
        }

        // Highest gain first; ties resolved lexicographically.
        size_t best = 0;
        for (size_t i = 1; i < remaining.size(); ++i) {
            if (gains[i] > gains[best]) {
                best = i;
            } else if (gains[i] == gains[best]) {
                const auto &a = remaining[i], &b = remaining[best];
                if (std::tie(a.snake_id, a.src, a.dst) < std::tie(b.snake_id, b.src, b.dst))
                    best = i;
            }
        }
        if (gains[best] <= 0.0) break; // nothing left that reduces latency

        LogicalLinkCandidate cand = remaining[best];
        double gain = gains[best];
        remaining.erase(remaining.begin() + best);
        gains.erase(gains.begin() + best);

        bool feasible = total < constraints.total_links &&
                        sel.per_snake_count[cand.snake_id] < e_snake &&
                        sel.out_count[cand.src] < constraints.links_per_node_per_direction &&
                        sel.in_count[cand.dst] < constraints.links_per_node_per_direction;
        sel.log.push_back(SelectionStep{cand, gain, feasible, feasible});
        if (!feasible) continue;

        ActivatedLink link;
        link.snake_id = cand.snake_id;
        link.src = cand.src;
        link.dst = cand.dst;
        link.forward = cand.forward;
        link.out_slot = sel.out_count[cand.src];
        link.in_slot = sel.in_count[cand.dst];
        link.gain = gain;
        link.step = static_cast<int>(sel.log.size()) - 1;
        sel.links.push_back(link);
        ++sel.per_snake_count[cand.snake_id];
        ++sel.out_count[cand.src];
        ++sel.in_count[cand.dst];
        ++total;
        rescore = true;
    }
    return sel;
}

RoutingTables build_routing_tables(const SnakeLayout& layout, const LinkSelection& selection,
                                   const CostModel& cost) {
    const MeshSpec& mesh = layout.mesh;
    int n = mesh.router_count();
    RoutingTables rt;
    rt.n = n;
    rt.pre.resize(static_cast<size_t>(n) * n);
    rt.cost.resize(static_cast<size_t>(n) * n);

    for (int node = 0; node < n; ++node) {
        for (int dest = 0; dest < n; ++dest) {
            RoutingTables::Entry entry;
            double best;
            if (node == dest) {
                entry.action = RoutingTables::Action::Eject;
                best = 0.0;
            } else {
                best = mesh.manhattan(node, dest) * cost.elec_hop_cycles;
                int best_link = -1;
                for (size_t li = 0; li < selection.links.size(); ++li) {
                    const auto& l = selection.links[li];
                    double via = mesh.manhattan(node, l.src) * cost.elec_hop_cycles +
                                 cost.photonic_edge_cycles +
                                 mesh.manhattan(l.dst, dest) * cost.elec_hop_cycles;
                    if (via < best) { // photonic only when strictly cheaper
                        best = via;
                        best_link = static_cast<int>(li);
                    }
                }
                if (best_link < 0) {
                    entry.action = RoutingTables::Action::Mesh;
                    entry.port = static_cast<std::int16_t>(xy_next_port(mesh, node, dest));
                } else if (selection.links[best_link].src == node) {
                    entry.action = RoutingTables::Action::Photonic;
                    entry.link = static_cast<std::int16_t>(best_link);
                } else {
                    entry.action = RoutingTables::Action::Mesh;
                    entry.port = static_cast<std::int16_t>(
                        xy_next_port(mesh, node, selection.links[best_link].src));
                }
            }
            rt.pre[static_cast<size_t>(node) * n + dest] = entry;
            rt.cost[static_cast<size_t>(node) * n + dest] = best;
        }
    }
    return rt;
}

nlohmann::json LinkSelection::to_json() const {
    nlohmann::json j;
    nlohmann::json links_json = nlohmann::json::array();
    for (const auto& l : links)
        links_json.push_back({{"snake", l.snake_id},
                              {"src", l.src},
                              {"dst", l.dst},
                              {"direction", l.forward ? "forward" : "reverse"},
                              {"out_slot", l.out_slot},
                              {"in_slot", l.in_slot},
                              {"gain", l.gain},
                              {"step", l.step}});
    j["activated_links"] = links_json;
    nlohmann::json log_json = nlohmann::json::array();
    for (const auto& s : log)
        log_json.push_back({{"snake", s.candidate.snake_id},
                            {"src", s.candidate.src},
                            {"dst", s.candidate.dst},
                            {"gain", s.gain},
                            {"feasible", s.feasible},
                            {"accepted", s.accepted}});
    j["selection_log"] = log_json;
    return j;
}

} // namespace snoc

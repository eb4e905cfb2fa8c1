#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "snoc/config.hpp"

namespace snoc {

// 2D electronic mesh. Router ids are row-major: id = y * width + x.
struct MeshSpec {
    int width = 8;
    int height = 8;
    double hop_length_mm = 2.5;
    int cores_per_router = 4;

    int router_count() const { return width * height; }
    int id_of(int x, int y) const { return y * width + x; }
    int x_of(int id) const { return id % width; }
    int y_of(int id) const { return id / width; }
    int manhattan(int a, int b) const;
    void validate() const;
    static MeshSpec from_config(const KeyValueConfig& cfg);
};

// One serpentine waveguide pair over a horizontal band of the mesh.
// `routers` is the boustrophedon visit order; `sites` the stride-spaced
// subset hosting modulator/detector banks (indices into the mesh).
struct Snake {
    int id = 0;
    std::vector<int> routers;
    std::vector<int> sites;
    double length_m = 0.0;

    int routers_per_snake() const { return static_cast<int>(routers.size()); }
    int site_count() const { return static_cast<int>(sites.size()); }
    // Position of a router in the serpentine order, -1 if absent.
    int position_of(int router) const;
    // Index of a router in the site list, -1 if not a site.
    int site_index_of(int router) const;
};

struct SnakeLayout {
    MeshSpec mesh;
    int snake_count = 0;
    int stride = 0;
    int site_offset = 0;
    std::vector<Snake> snakes;

    int total_sites() const;
    // Snake owning a router (every router belongs to exactly one band).
    const Snake& snake_of(int router) const;
};

// A candidate point-to-point logical link between two sites of one snake.
// `forward` says which of the two directional waveguides carries it.
struct LogicalLinkCandidate {
    int snake_id = 0;
    int src = 0;
    int dst = 0;
    bool forward = true;
};

struct ResourceSummary {
    int waveguides = 0;
    double avg_wavelengths_per_waveguide = 0.0;
    double length_per_waveguide_m = 0.0;
    int addon_routers = 0;
    long long mrr_count = 0;
    double data_rate_gbps = 0.0;
};

// Builds K serpentine snakes with stride S over the mesh. Each snake owns a
// band of height/K rows traversed boustrophedon; sites start at
// `site_offset` within the visit order. Throws ConfigError when K does not
// divide the height or S does not divide the per-snake router count.
SnakeLayout build_layout(const MeshSpec& mesh, int snakes, int stride, int site_offset = 0);

// All ordered site pairs within each snake, both directions.
std::vector<LogicalLinkCandidate> candidates(const SnakeLayout& layout);

// Structural resource accounting for a layout populated with
// `waveguides_per_snake` waveguides (both directions of one snake) each
// carrying `wavelengths_per_waveguide` channels.
ResourceSummary resource_summary(const SnakeLayout& layout, int waveguides_per_snake,
                                 double wavelengths_per_waveguide, double data_rate_gbps);

nlohmann::json layout_to_json(const SnakeLayout& layout);

} // namespace snoc

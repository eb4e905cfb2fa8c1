#include "snoc/topology.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

#include "snoc/error.hpp"

namespace snoc {

int MeshSpec::manhattan(int a, int b) const {
    return std::abs(x_of(a) - x_of(b)) + std::abs(y_of(a) - y_of(b));
}

void MeshSpec::validate() const {
    if (width < 2 || height < 2) throw ConfigError("mesh must be at least 2x2");
    if (hop_length_mm <= 0.0) throw ConfigError("hop length must be > 0");
    if (cores_per_router <= 0) throw ConfigError("cores per router must be > 0");
}

MeshSpec MeshSpec::from_config(const KeyValueConfig& cfg) {
    MeshSpec m;
    m.width = static_cast<int>(cfg.get_int("mesh.width", m.width));
    m.height = static_cast<int>(cfg.get_int("mesh.height", m.height));
    m.hop_length_mm = cfg.get_double("mesh.hop_length_mm", m.hop_length_mm);
    m.cores_per_router = static_cast<int>(cfg.get_int("mesh.cores_per_router", m.cores_per_router));
    m.validate();
    return m;
}

int Snake::position_of(int router) const {
    for (size_t i = 0; i < routers.size(); ++i)
        if (routers[i] == router) return static_cast<int>(i);
    return -1;
}

int Snake::site_index_of(int router) const {
    for (size_t i = 0; i < sites.size(); ++i)
        if (sites[i] == router) return static_cast<int>(i);
    return -1;
}

int SnakeLayout::total_sites() const {
    int n = 0;
    for (const auto& s : snakes) n += s.site_count();
    return n;
}

const Snake& SnakeLayout::snake_of(int router) const {
    int rows_per_snake = mesh.height / snake_count;
    int band = mesh.y_of(router) / rows_per_snake;
    return snakes[band];
}

SnakeLayout build_layout(const MeshSpec& mesh, int snakes, int stride, int site_offset) {
    mesh.validate();
    if (snakes <= 0 || stride <= 0) throw ConfigError("snake count and stride must be > 0");
    if (mesh.height % snakes != 0)
        throw ConfigError("snake count " + std::to_string(snakes) +
                          " does not divide mesh height " + std::to_string(mesh.height));
    int rows_per_snake = mesh.height / snakes;
    int routers_per_snake = rows_per_snake * mesh.width;
    if (routers_per_snake % stride != 0)
        throw ConfigError("stride " + std::to_string(stride) +
                          " does not divide the per-snake router count " +
                          std::to_string(routers_per_snake));
    if (site_offset < 0 || site_offset >= stride)
        throw ConfigError("site offset must be in [0, stride)");

    SnakeLayout layout;
    layout.mesh = mesh;
    layout.snake_count = snakes;
    layout.stride = stride;
    layout.site_offset = site_offset;
    layout.snakes.resize(snakes);
    for (int k = 0; k < snakes; ++k) {
        Snake& s = layout.snakes[k];
        s.id = k;
        s.routers.reserve(routers_per_snake);
        for (int r = 0; r < rows_per_snake; ++r) {
            int y = k * rows_per_snake + r;
            if (r % 2 == 0) {
                for (int x = 0; x < mesh.width; ++x) s.routers.push_back(mesh.id_of(x, y));
            } else {
                for (int x = mesh.width - 1; x >= 0; --x) s.routers.push_back(mesh.id_of(x, y));
            }
        }
        for (int i = site_offset; i < routers_per_snake; i += stride)
            s.sites.push_back(s.routers[i]);
        s.length_m = routers_per_snake * mesh.hop_length_mm * 1e-3;
    }
    return layout;
}

std::vector<LogicalLinkCandidate> candidates(const SnakeLayout& layout) {
    std::vector<LogicalLinkCandidate> out;
    for (const auto& snake : layout.snakes) {
        int n = snake.site_count();
        out.reserve(out.size() + static_cast<size_t>(n) * (n - 1));
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) {
                if (i == j) continue;
                out.push_back(LogicalLinkCandidate{snake.id, snake.sites[i], snake.sites[j], i < j});
            }
        }
    }
    return out;
}

ResourceSummary resource_summary(const SnakeLayout& layout, int waveguides_per_snake,
                                 double wavelengths_per_waveguide, double data_rate_gbps) {
    if (waveguides_per_snake < 0 || wavelengths_per_waveguide < 0.0)
        throw ConfigError("waveguide and wavelength counts must be >= 0");
    ResourceSummary r;
    r.waveguides = waveguides_per_snake * layout.snake_count;
    r.avg_wavelengths_per_waveguide = wavelengths_per_waveguide;
    r.length_per_waveguide_m = layout.snakes.empty() ? 0.0 : layout.snakes.front().length_m;
    r.addon_routers = layout.total_sites();
    double mrrs = 0.0;
    for (const auto& s : layout.snakes)
        mrrs += static_cast<double>(s.site_count()) * waveguides_per_snake *
                wavelengths_per_waveguide * 2.0;
    r.mrr_count = static_cast<long long>(std::llround(mrrs));
    r.data_rate_gbps = data_rate_gbps;
    return r;
}

nlohmann::json layout_to_json(const SnakeLayout& layout) {
    nlohmann::json j;
    j["mesh"] = {{"width", layout.mesh.width},
                 {"height", layout.mesh.height},
                 {"hop_length_mm", layout.mesh.hop_length_mm},
                 {"cores_per_router", layout.mesh.cores_per_router}};
    j["snakes"] = layout.snake_count;
    j["stride"] = layout.stride;
    j["site_offset"] = layout.site_offset;
    nlohmann::json snakes = nlohmann::json::array();
    for (const auto& s : layout.snakes) {
        nlohmann::json js;
        js["id"] = s.id;
        js["length_m"] = s.length_m;
        js["routers"] = s.routers;
        nlohmann::json sites = nlohmann::json::array();
        for (int site : s.sites)
            sites.push_back({{"router", site},
                             {"x", layout.mesh.x_of(site)},
                             {"y", layout.mesh.y_of(site)}});
        js["sites"] = sites;
        snakes.push_back(js);
    }
    j["snake_list"] = snakes;
    size_t cand = 0;
    for (const auto& s : layout.snakes)
        cand += static_cast<size_t>(s.site_count()) * (s.site_count() - 1);
    j["candidate_links"] = cand;
    return j;
}

} // namespace snoc

#include "snoc/energy.hpp"

#include "snoc/error.hpp"

namespace snoc {

int mesh_channel_count(const MeshSpec& mesh) {
    return 2 * (mesh.width * (mesh.height - 1) + mesh.height * (mesh.width - 1));
}

EnergyReport account(const SimReport& report, const SnakeLayout& layout,
                     const LinkSelection& selection, const std::vector<PowerBreakdown>& per_snake,
                     const ElectricalCoefficients& coef, const RouterConfig& rc,
                     const SimConfig& cfg, const EnergyReport* baseline,
                     int directions_per_snake) {
    if (!selection.links.empty() && per_snake.size() < static_cast<size_t>(layout.snake_count))
        throw ConfigError("missing per-snake photonic operating points for energy accounting");

    EnergyReport e;
    e.sim_seconds = report.cycles / cfg.clock_hz;

    e.elec_router_dyn_j = report.router_traversals * router_energy_per_flit_pj(rc, coef) * 1e-12;
    e.elec_link_dyn_j =
        report.link_mm * coef.link_dyn_pj_per_bit_per_mm * rc.flit_size_bits * 1e-12;
    for (size_t li = 0; li < selection.links.size(); ++li) {
        int snake = selection.links[li].snake_id;
        double bits = static_cast<double>(report.photonic_link_flits[li]) * cfg.flit_size_bits;
        e.photonic_dyn_j += bits * per_snake[snake].dynamic_pj * 1e-12;
    }
    e.dynamic_j = e.elec_router_dyn_j + e.elec_link_dyn_j + e.photonic_dyn_j;

    double photonic_static_w = 0.0;
    if (!per_snake.empty()) {
        for (int k = 0; k < layout.snake_count; ++k)
            photonic_static_w += per_snake[k].static_w() * directions_per_snake;
    }
    double elec_leak_w = layout.mesh.router_count() * router_leakage_w(rc, coef) +
                         mesh_channel_count(layout.mesh) * coef.link_leakage_w_per_mm *
                             layout.mesh.hop_length_mm;
    e.photonic_static_j = photonic_static_w * e.sim_seconds;
    e.electrical_leakage_j = elec_leak_w * e.sim_seconds;
    e.static_j = e.photonic_static_j + e.electrical_leakage_j;
    e.total_j = e.dynamic_j + e.static_j;

    for (const auto& p : report.packets)
        e.delivered_bits += static_cast<double>(p.size_flits) * cfg.flit_size_bits;
    e.dynamic_pj_per_bit = e.delivered_bits > 0 ? e.dynamic_j / e.delivered_bits * 1e12 : 0.0;

    if (baseline) {
        EnergyReport::Ratios r;
        auto ratio = [](double v, double base) { return base > 0 ? v / base : 0.0; };
        r.dynamic = ratio(e.dynamic_j, baseline->dynamic_j);
        r.dynamic_per_bit = ratio(e.dynamic_pj_per_bit, baseline->dynamic_pj_per_bit);
        r.stat = ratio(e.static_j, baseline->static_j);
        r.total = ratio(e.total_j, baseline->total_j);
        e.vs_baseline = r;
    }
    return e;
}

StaticPowerSummary static_power_summary(const SnakeLayout& layout,
                                        const std::vector<DseResult>& per_snake,
                                        int directions_per_snake) {
    if (per_snake.size() < static_cast<size_t>(layout.snake_count))
        throw ConfigError("static power summary needs one operating point per snake");
    StaticPowerSummary s;
    for (int k = 0; k < layout.snake_count; ++k) {
        const PowerBreakdown& b = per_snake[k].breakdown;
        s.laser_w += b.laser_w * directions_per_snake;
        s.trimming_w += b.mrr_heating_w * directions_per_snake;
        s.leakage_w += b.leakage_w * directions_per_snake;
    }
    return s;
}

nlohmann::json EnergyReport::to_json() const {
    nlohmann::json j;
    j["elec_router_dyn_j"] = elec_router_dyn_j;
    j["elec_link_dyn_j"] = elec_link_dyn_j;
    j["photonic_dyn_j"] = photonic_dyn_j;
    j["dynamic_j"] = dynamic_j;
    j["photonic_static_j"] = photonic_static_j;
    j["electrical_leakage_j"] = electrical_leakage_j;
    j["static_j"] = static_j;
    j["total_j"] = total_j;
    j["sim_seconds"] = sim_seconds;
    j["delivered_bits"] = delivered_bits;
    j["dynamic_pj_per_bit"] = dynamic_pj_per_bit;
    if (vs_baseline) {
        j["vs_baseline"] = {{"dynamic", vs_baseline->dynamic},
                            {"dynamic_per_bit", vs_baseline->dynamic_per_bit},
                            {"static", vs_baseline->stat},
                            {"total", vs_baseline->total}};
    }
    return j;
}

} // namespace snoc

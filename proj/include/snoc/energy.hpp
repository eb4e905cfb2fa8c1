#pragma once

#include <optional>
#include <vector>

#include <json.hpp>

#include "snoc/dse.hpp"
#include "snoc/electrical.hpp"
#include "snoc/sim.hpp"

namespace snoc {

// Dynamic energy is a linear functional of the SimReport flit-hop counters;
// static energy amortizes photonic static power and electrical leakage over
// the simulated wall time (drain included).
struct EnergyReport {
    double elec_router_dyn_j = 0.0;
    double elec_link_dyn_j = 0.0;
    double photonic_dyn_j = 0.0;
    double dynamic_j = 0.0;

    double photonic_static_j = 0.0;
    double electrical_leakage_j = 0.0;
    double static_j = 0.0;

    double total_j = 0.0;
    double sim_seconds = 0.0;
    double delivered_bits = 0.0;
    double dynamic_pj_per_bit = 0.0;

    struct Ratios {
        double dynamic = 0.0;
        double dynamic_per_bit = 0.0;
        double stat = 0.0;
        double total = 0.0;
    };
    std::optional<Ratios> vs_baseline;

    nlohmann::json to_json() const;
};

// Combines one run's counters with electrical coefficients and the
// per-snake photonic operating points. `per_snake` holds one PowerBreakdown
// per snake (index = snake id); pass an empty vector for a baseline mesh.
// `directions_per_snake` counts the waveguide sets per snake (forward and
// reverse) for static power.
EnergyReport account(const SimReport& report, const SnakeLayout& layout,
                     const LinkSelection& selection,
                     const std::vector<PowerBreakdown>& per_snake,
                     const ElectricalCoefficients& coef, const RouterConfig& rc,
                     const SimConfig& cfg, const EnergyReport* baseline = nullptr,
                     int directions_per_snake = 2);

struct StaticPowerSummary {
    double laser_w = 0.0;
    double trimming_w = 0.0;
    double leakage_w = 0.0;
    double total_w() const { return laser_w + trimming_w + leakage_w; }
};

// Sums the static components of the per-snake operating points across all
// snakes and both waveguide directions.
StaticPowerSummary static_power_summary(const SnakeLayout& layout,
                                        const std::vector<DseResult>& per_snake,
                                        int directions_per_snake = 2);

// Unidirectional mesh channel count (each adjacency carries one channel per
// direction).
int mesh_channel_count(const MeshSpec& mesh);

} // namespace snoc

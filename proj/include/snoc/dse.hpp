#pragma once

#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "snoc/electrical.hpp"
#include "snoc/photonic.hpp"

namespace snoc {

// The exhaustive MWMR design grid. Valid (E, W, D) combinations respect
// ceil(E/4) <= W <= wavelength capacity; (L, S) pairs with non-integer site
// counts are excluded.
struct DseGrid {
    std::vector<double> data_rates_bps = {2e9, 4e9, 8e9, 16e9, 32e9};
    std::vector<int> link_counts = {4, 8, 16, 32};
    std::vector<double> lengths_m; // defaults to 2.5 mm .. 160 mm in 2.5 mm steps
    std::vector<int> strides = {1, 2, 4, 8};
    double injection_rate = 0.1;

    static DseGrid defaults();
    static DseGrid from_config(const KeyValueConfig& cfg);
};

struct DseResult {
    MwmrLinkConfig config;
    ModulatorTuning tuning;
    PowerBreakdown breakdown;

    double total_pj() const { return breakdown.total_pj; }
};

// Deterministic lexicographic enumeration over (L, E, S, D, W).
// Throws ConfigError on an empty grid.
std::vector<MwmrLinkConfig> enumerate_grid(const DseGrid& grid, const PhotonicTechParams& tech);

// Energy-optimal (D, W) for one (L, E, S) point. Ties break toward smaller
// W, then smaller D. Throws InfeasibleDesignError when no combination fits
// under the laser ceiling.
DseResult find_optimum(double length_m, int links, int stride, const PhotonicTechParams& tech,
                       double injection_rate,
                       const std::vector<double>& data_rates_bps = DseGrid{}.data_rates_bps);

struct TrendRow {
    double length_m = 0.0;
    bool feasible = false;
    std::optional<DseResult> result;
    std::string error;
};

// One find_optimum row per length (the optimal-parameters-vs-length view).
std::vector<TrendRow> trend_table(const std::vector<double>& lengths_m, int links, int stride,
                                  const PhotonicTechParams& tech, double injection_rate);

struct CompareRow {
    double length_m = 0.0;
    bool photonic_feasible = false;
    double photonic_pj_per_bit = 0.0;
    double electrical_pj_per_bit = 0.0;
};

// Optimized photonic link vs. an equal-length electrical router/link chain.
std::vector<CompareRow> compare_vs_electrical(const std::vector<double>& lengths_m, int links,
                                              int stride, const PhotonicTechParams& tech,
                                              const ElectricalCoefficients& coef,
                                              double injection_rate);

// CSV writers. Headers are part of the file contract:
// L_mm,E,S,D_lambda_Gbps,W,laser_pJ,trim_pJ,lkg_pJ,dyn_pJ,total_pJ
void write_dse_csv(std::ostream& os, const std::vector<DseResult>& rows);
void write_trend_csv(std::ostream& os, const std::vector<TrendRow>& rows, int links, int stride);
void write_compare_csv(std::ostream& os, const std::vector<CompareRow>& rows, int links,
                       int stride);

} // namespace snoc

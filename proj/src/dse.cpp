#include "snoc/dse.hpp"

#include <cmath>
#include <iomanip>

#include "snoc/error.hpp"

namespace snoc {

namespace {

bool sites_integral(double length_m, int stride, const PhotonicTechParams& tech) {
    double sites = length_m / (tech.hop_length_m() * stride);
    return sites >= 0.5 && std::abs(sites - std::round(sites)) < 1e-6;
}

int min_waveguides(int links) { return (links + 3) / 4; }

int capacity(double rate_bps, const PhotonicTechParams& tech) {
    return static_cast<int>(std::llround(tech.aggregate_waveguide_rate_bps / rate_bps));
}

} // namespace

DseGrid DseGrid::defaults() {
    DseGrid g;
    for (int i = 1; i <= 64; ++i) g.lengths_m.push_back(i * 0.0025);
    return g;
}

DseGrid DseGrid::from_config(const KeyValueConfig& cfg) {
    DseGrid g = defaults();
    auto rates = cfg.get_list("dse.data_rates_gbps", {});
    if (!rates.empty()) {
        g.data_rates_bps.clear();
        for (double r : rates) g.data_rates_bps.push_back(r * 1e9);
    }
    auto links = cfg.get_list("dse.link_counts", {});
    if (!links.empty()) {
        g.link_counts.clear();
        for (double e : links) g.link_counts.push_back(static_cast<int>(e));
    }
    auto lengths = cfg.get_list("dse.lengths_mm", {});
    if (!lengths.empty()) {
        g.lengths_m.clear();
        for (double l : lengths) g.lengths_m.push_back(l * 1e-3);
    }
    auto strides = cfg.get_list("dse.strides", {});
    if (!strides.empty()) {
        g.strides.clear();
        for (double s : strides) g.strides.push_back(static_cast<int>(s));
    }
    g.injection_rate = cfg.get_double("dse.injection_rate", g.injection_rate);
    return g;
}

std::vector<MwmrLinkConfig> enumerate_grid(const DseGrid& grid, const PhotonicTechParams& tech) {
    if (grid.data_rates_bps.empty() || grid.link_counts.empty() || grid.lengths_m.empty() ||
        grid.strides.empty())
        throw ConfigError("empty design grid");
    std::vector<MwmrLinkConfig> out;
    for (double length : grid.lengths_m) {
        for (int links : grid.link_counts) {
            for (int stride : grid.strides) {
                if (!sites_integral(length, stride, tech)) continue;
                for (double rate : grid.data_rates_bps) {
                    int w_lo = min_waveguides(links);
                    int w_hi = capacity(rate, tech);
                    for (int w = w_lo; w <= w_hi; ++w) {
                        MwmrLinkConfig cfg;
                        cfg.data_rate_per_wavelength_bps = rate;
                        cfg.logical_links = links;
                        cfg.waveguides = w;
                        cfg.length_m = length;
                        cfg.stride = stride;
                        cfg.injection_rate = grid.injection_rate;
                        out.push_back(cfg);
                    }
                }
            }
        }
    }
    if (out.empty()) throw ConfigError("design grid contains no valid configuration");
    return out;
}

DseResult find_optimum(double length_m, int links, int stride, const PhotonicTechParams& tech,
                       double injection_rate, const std::vector<double>& data_rates_bps) {
    if (!sites_integral(length_m, stride, tech))
        throw ConfigError("length / (hop * stride) is not a positive integer");

    bool have_best = false;
    DseResult best;
    for (double rate : data_rates_bps) {
        int w_lo = min_waveguides(links);
        int w_hi = capacity(rate, tech);
        for (int w = w_lo; w <= w_hi; ++w) {
            MwmrLinkConfig cfg;
            cfg.data_rate_per_wavelength_bps = rate;
            cfg.logical_links = links;
            cfg.waveguides = w;
            cfg.length_m = length_m;
            cfg.stride = stride;
            cfg.injection_rate = injection_rate;
            try {
                ModulatorTuning tuning = optimize_modulator(cfg, tech);
                PowerBreakdown b = energy_per_bit(cfg, tech, tuning);
                bool better = !have_best || b.total_pj < best.breakdown.total_pj;
                if (!better && b.total_pj == best.breakdown.total_pj) {
                    better = w < best.config.waveguides ||
                             (w == best.config.waveguides &&
                              rate < best.config.data_rate_per_wavelength_bps);
                }
                if (better) {
                    best = DseResult{cfg, tuning, b};
                    have_best = true;
                }
            } catch (const InfeasibleDesignError&) {
                continue;
            }
        }
    }
    if (!have_best)
        throw InfeasibleDesignError("no feasible (D, W) combination at L = " +
                                    std::to_string(length_m) + " m");
    return best;
}

std::vector<TrendRow> trend_table(const std::vector<double>& lengths_m, int links, int stride,
                                  const PhotonicTechParams& tech, double injection_rate) {
    if (lengths_m.empty()) throw ConfigError("trend table needs at least one length");
    std::vector<TrendRow> rows;
    rows.reserve(lengths_m.size());
    for (double length : lengths_m) {
        TrendRow row;
        row.length_m = length;
        try {
            row.result = find_optimum(length, links, stride, tech, injection_rate);
            row.feasible = true;
        } catch (const Error& e) {
            row.error = e.what();
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

std::vector<CompareRow> compare_vs_electrical(const std::vector<double>& lengths_m, int links,
                                              int stride, const PhotonicTechParams& tech,
                                              const ElectricalCoefficients& coef,
                                              double injection_rate) {
    std::vector<CompareRow> rows;
    rows.reserve(lengths_m.size());
    for (double length : lengths_m) {
        CompareRow row;
        row.length_m = length;
        row.electrical_pj_per_bit =
            electrical_chain_energy_per_bit_pj(length, coef, injection_rate, tech.hop_length_mm);
        try {
            DseResult r = find_optimum(length, links, stride, tech, injection_rate);
            row.photonic_pj_per_bit = r.breakdown.total_pj;
            row.photonic_feasible = true;
        } catch (const Error&) {
            row.photonic_feasible = false;
        }
        rows.push_back(row);
    }
    return rows;
}

namespace {

void write_result_row(std::ostream& os, const DseResult& r) {
    os << r.config.length_m * 1e3 << ',' << r.config.logical_links << ',' << r.config.stride
       << ',' << r.config.data_rate_per_wavelength_bps / 1e9 << ',' << r.config.waveguides << ','
       << r.breakdown.laser_pj << ',' << r.breakdown.mrr_heating_pj << ','
       << r.breakdown.leakage_pj << ',' << r.breakdown.dynamic_pj << ',' << r.breakdown.total_pj
       << '\n';
}

} // namespace

void write_dse_csv(std::ostream& os, const std::vector<DseResult>& rows) {
    os << "L_mm,E,S,D_lambda_Gbps,W,laser_pJ,trim_pJ,lkg_pJ,dyn_pJ,total_pJ\n";
    os << std::setprecision(10);
    for (const auto& r : rows) write_result_row(os, r);
}

void write_trend_csv(std::ostream& os, const std::vector<TrendRow>& rows, int links, int stride) {
    os << "L_mm,E,S,D_lambda_Gbps,W,laser_pJ,trim_pJ,lkg_pJ,dyn_pJ,total_pJ\n";
    os << std::setprecision(10);
    for (const auto& r : rows) {
        if (r.feasible) {
            write_result_row(os, *r.result);
        } else {
            os << r.length_m * 1e3 << ',' << links << ',' << stride << ",,,,,,,infeasible\n";
        }
    }
}

void write_compare_csv(std::ostream& os, const std::vector<CompareRow>& rows, int links,
                       int stride) {
    os << "L_mm,E,S,photonic_pJ,electrical_pJ\n";
    os << std::setprecision(10);
    for (const auto& r : rows) {
        os << r.length_m * 1e3 << ',' << links << ',' << stride << ',';
        if (r.photonic_feasible)
            os << r.photonic_pj_per_bit;
        else
            os << "infeasible";
        os << ',' << r.electrical_pj_per_bit << '\n';
    }
}

} // namespace snoc

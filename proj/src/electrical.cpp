#include "snoc/electrical.hpp"

#include <cmath>
#include <string>

#include "snoc/error.hpp"

namespace snoc {

namespace {

double frequency_scale(double clock_hz, const ElectricalCoefficients& coef) {
    double f = clock_hz / 1e9;
    return std::pow(f, coef.freq_exponent) + coef.wide_flit_penalty * (1.0 / f - 1.0) * (1.0 / f - 1.0);
}

} // namespace

RouterConfig RouterConfig::for_clock(double clock_hz, double link_rate_bps,
                                     int storage_bits_per_port) {
    if (clock_hz <= 0.0) throw ConfigError("router clock must be > 0");
    double flit = link_rate_bps / clock_hz;
    if (std::abs(flit - std::round(flit)) > 1e-9)
        throw ConfigError("link rate / clock does not give an integer flit size");
    RouterConfig rc;
    rc.clock_hz = clock_hz;
    rc.flit_size_bits = static_cast<int>(std::llround(flit));
    if (storage_bits_per_port % rc.flit_size_bits != 0)
        throw ConfigError("per-port storage is not a whole number of flits");
    rc.buffer_depth_flits = storage_bits_per_port / rc.flit_size_bits;
    rc.validate(link_rate_bps, storage_bits_per_port);
    return rc;
}

void RouterConfig::validate(double link_rate_bps, int storage_bits_per_port) const {
    if (clock_hz <= 0.0 || flit_size_bits <= 0 || buffer_depth_flits <= 0 || ports <= 0 ||
        vcs_per_port <= 0)
        throw ConfigError("router configuration fields must be positive");
    if (std::abs(flit_size_bits * clock_hz - link_rate_bps) > 1e-3)
        throw ConfigError("flit size * clock must equal the link rate exactly");
    if (flit_size_bits * buffer_depth_flits != storage_bits_per_port)
        throw ConfigError("buffer depth * flit size must equal per-port storage exactly");
}

void ElectricalCoefficients::validate() const {
    if (router_dyn_pj_per_bit < 0 || link_dyn_pj_per_bit_per_mm < 0 ||
        router_base_leakage_w < 0 || decode_leakage_per_entry_w < 0 || link_leakage_w_per_mm < 0 ||
        wide_flit_penalty < 0)
        throw ConfigError("electrical coefficients must be >= 0");
    if (link_rate_bps <= 0) throw ConfigError("link rate must be > 0");
}

ElectricalCoefficients ElectricalCoefficients::from_config(const KeyValueConfig& cfg) {
    ElectricalCoefficients c;
    const std::string s = "electrical.";
    c.router_dyn_pj_per_bit = cfg.get_double(s + "router_dyn_pj_per_bit", c.router_dyn_pj_per_bit);
    c.freq_exponent = cfg.get_double(s + "freq_exponent", c.freq_exponent);
    c.wide_flit_penalty = cfg.get_double(s + "wide_flit_penalty", c.wide_flit_penalty);
    c.link_dyn_pj_per_bit_per_mm =
        cfg.get_double(s + "link_dyn_pj_per_bit_per_mm", c.link_dyn_pj_per_bit_per_mm);
    c.router_base_leakage_w = cfg.get_double(s + "router_base_leakage_w", c.router_base_leakage_w);
    c.decode_leakage_per_entry_w =
        cfg.get_double(s + "decode_leakage_per_entry_w", c.decode_leakage_per_entry_w);
    c.link_leakage_w_per_mm = cfg.get_double(s + "link_leakage_w_per_mm", c.link_leakage_w_per_mm);
    c.link_rate_bps = cfg.get_double(s + "link_rate_bps", c.link_rate_bps);
    c.validate();
    return c;
}

double router_energy_per_flit_pj(const RouterConfig& rc, const ElectricalCoefficients& coef) {
    return coef.router_dyn_pj_per_bit * rc.flit_size_bits * frequency_scale(rc.clock_hz, coef);
}

double link_energy_per_flit_pj(const RouterConfig& rc, const ElectricalCoefficients& coef,
                               double length_mm) {
    return coef.link_dyn_pj_per_bit_per_mm * rc.flit_size_bits * length_mm;
}

double router_leakage_w(const RouterConfig& rc, const ElectricalCoefficients& coef) {
    return coef.router_base_leakage_w + coef.decode_leakage_per_entry_w *
                                            rc.buffer_depth_flits * rc.vcs_per_port * rc.ports;
}

std::vector<RouterSweepRow> sweep_router_configs(const ElectricalCoefficients& coef,
                                                 double injection_rate) {
    if (injection_rate <= 0.0 || injection_rate > 1.0)
        throw ConfigError("injection rate must be in (0, 1]");
    const double clocks[] = {4e9, 2e9, 1e9, 0.5e9};
    std::vector<RouterSweepRow> rows;
    rows.reserve(4);
    double offered_bps = injection_rate * coef.link_rate_bps;
    for (double f : clocks) {
        RouterSweepRow row;
        row.config = RouterConfig::for_clock(f, coef.link_rate_bps);
        row.dynamic_pj_per_bit =
            router_energy_per_flit_pj(row.config, coef) / row.config.flit_size_bits;
        row.leakage_pj_per_bit = router_leakage_w(row.config, coef) / offered_bps * 1e12;
        row.energy_per_bit_pj = row.dynamic_pj_per_bit + row.leakage_pj_per_bit;
        rows.push_back(row);
    }
    return rows;
}

double electrical_chain_energy_per_bit_pj(double length_m, const ElectricalCoefficients& coef,
                                          double injection_rate, double hop_length_mm) {
    if (injection_rate <= 0.0 || injection_rate > 1.0)
        throw ConfigError("injection rate must be in (0, 1]");
    double hops_f = length_m * 1e3 / hop_length_mm;
    if (std::abs(hops_f - std::round(hops_f)) > 1e-6 || hops_f < 0.5)
        throw ConfigError("chain length must be a positive multiple of the hop length");
    double hops = std::round(hops_f);

    RouterConfig rc = RouterConfig::for_clock(1e9, coef.link_rate_bps);
    double dyn_per_bit = (router_energy_per_flit_pj(rc, coef) +
                          link_energy_per_flit_pj(rc, coef, hop_length_mm)) /
                         rc.flit_size_bits;
    double leak_per_hop_w =
        router_leakage_w(rc, coef) + coef.link_leakage_w_per_mm * hop_length_mm;
    double offered_bps = injection_rate * coef.link_rate_bps;
    return hops * (dyn_per_bit + leak_per_hop_w / offered_bps * 1e12);
}

} // namespace snoc

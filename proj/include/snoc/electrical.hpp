#pragma once

#include <vector>

#include "snoc/config.hpp"

namespace snoc {

// A mesh router operating point. Flit size and buffer depth follow from the
// clock so every configuration moves 128 Gb/s per link and stores 512 bits
// per port (buffer_depth * flit_size = 512).
struct RouterConfig {
    double clock_hz = 1e9;
    int flit_size_bits = 128;
    int buffer_depth_flits = 4;
    int ports = 5;
    int vcs_per_port = 4;

    static RouterConfig for_clock(double clock_hz, double link_rate_bps = 128e9,
                                  int storage_bits_per_port = 512);
    void validate(double link_rate_bps = 128e9, int storage_bits_per_port = 512) const;
};

// Calibrated energy coefficients for routers and links.
//
// Dynamic energy per flit is router_dyn_pj_per_bit * F * scale(f) with
// scale(f) = (f / 1 GHz)^freq_exponent + wide_flit_penalty * (1 GHz/f - 1)^2.
// The exponent term makes dynamic energy per bit shrink as the clock drops;
// the penalty term charges the disproportionately wide datapath (crossbar
// wire spans grow with flit width) that comes with sub-GHz clocks.
// Leakage is a base term plus a per-buffer-entry decode term.
struct ElectricalCoefficients {
    double router_dyn_pj_per_bit = 0.10;
    double freq_exponent = 0.15;
    double wide_flit_penalty = 0.30;
    double link_dyn_pj_per_bit_per_mm = 0.02;
    double router_base_leakage_w = 1.5e-3;
    double decode_leakage_per_entry_w = 1.0e-6;
    double link_leakage_w_per_mm = 1.2e-4;
    double link_rate_bps = 128e9;

    void validate() const;
    static ElectricalCoefficients from_config(const KeyValueConfig& cfg);
};

// Dynamic switching energy for one flit crossing one router.
double router_energy_per_flit_pj(const RouterConfig& rc, const ElectricalCoefficients& coef);

// Dynamic energy for one flit crossing a wire of the given length.
double link_energy_per_flit_pj(const RouterConfig& rc, const ElectricalCoefficients& coef,
                               double length_mm);

// Static router power: base + decode term * buffer depth * VCs * ports.
double router_leakage_w(const RouterConfig& rc, const ElectricalCoefficients& coef);

struct RouterSweepRow {
    RouterConfig config;
    double dynamic_pj_per_bit = 0.0;
    double leakage_pj_per_bit = 0.0;
    double energy_per_bit_pj = 0.0;
};

// Evaluates the four standard configurations (4/2/1/0.5 GHz), ordered by
// descending clock. Energy per bit = dynamic per bit + leakage amortized
// over the offered bit rate (injection_rate * link rate).
std::vector<RouterSweepRow> sweep_router_configs(const ElectricalCoefficients& coef,
                                                 double injection_rate);

// Energy per bit of a linear chain of routers and links covering `length_m`
// at hop_length_mm per stage, using the 128-bit / 1 GHz reference router.
double electrical_chain_energy_per_bit_pj(double length_m, const ElectricalCoefficients& coef,
                                          double injection_rate, double hop_length_mm = 2.5);

} // namespace snoc

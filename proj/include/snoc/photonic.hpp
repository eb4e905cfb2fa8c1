#pragma once

#include <cstdint>

#include "snoc/config.hpp"

namespace snoc {

// Device and circuit constants for the nanophotonic MWMR link model.
// Loss figures are in dB, rates in bit/s, and the per-component latency
// budget in picoseconds. Defaults describe an 11 nm class link with a
// 2 THz free spectral range and 512 Gb/s of aggregate capacity per
// waveguide.
struct PhotonicTechParams {
    // Optical loss budget.
    double waveguide_loss_db_per_m = 100.0;
    double coupler_loss_db = 1.0;
    double bending_loss_db = 0.0;
    double ring_through_loss_db = 0.01; // per ring passed on the waveguide
    double ring_drop_loss_db = 1.0;
    double detector_loss_db = 1.0;

    // Laser and microring devices.
    double laser_efficiency = 0.25;            // wall-plug fraction
    double ring_area_um2 = 100.0;
    double fsr_hz = 2e12;                      // free spectral range
    double tuning_efficiency_hz_per_k = 10e9;  // resonance shift per kelvin
    double heating_efficiency_k_per_mw = 100.0;
    double temp_range_k = 100.0;               // 280-380 K operating span
    bool clamp_full_fsr_to_temp_range = false; // opt-in clamp for full-FSR tuning

    // Receiver model: a base sensitivity plus an extinction-ratio penalty
    // plus a data-rate scaling of the required optical power,
    // (D / 16 Gb/s)^sensitivity_rate_exponent.
    double responsivity_a_per_w = 1.1;
    double target_ber = 1e-15;
    double detector_sensitivity_dbm = -22.0;
    double sensitivity_reference_rate_bps = 16e9;
    double sensitivity_rate_exponent = 2.0;
    double laser_ceiling_w_per_waveguide = 10.0;

    // Latency budget (Table-style component delays).
    double modulator_driver_ps = 9.5;
    double modulator_delay_ps = 14.3;    // E-O conversion
    double photodetector_delay_ps = 0.2; // O-E conversion
    double amplifier_delay_ps = 4.0;
    double propagation_ps_per_mm = 4.67;

    // Rates and mesh geometry.
    double aggregate_waveguide_rate_bps = 512e9;
    double logical_link_rate_bps = 128e9;
    double hop_length_mm = 2.5;

    // Per-bit electronics energy for the transceiver chain and the static
    // leakage of the per-site add-on electronics. These are calibration
    // constants, exposed in the configuration file.
    double serializer_pj_per_bit = 0.068;  // scales with 16 Gb/s / D
    double driver_pj_per_bit = 0.148;      // scales with D / 16 Gb/s
    double receiver_pj_per_bit = 0.0;
    double modulator_dyn_pj_per_bit_per_db = 0.02; // per dB of insertion loss
    double leakage_per_site_w = 7.314e-4;

    double hop_length_m() const { return hop_length_mm * 1e-3; }

    // Throws ConfigError when an invariant is violated.
    void validate() const;

    static PhotonicTechParams from_config(const KeyValueConfig& cfg);
};

// One MWMR interconnect design point: data rate per wavelength D, logical
// link count E, waveguide count W, physical length L and site stride S.
struct MwmrLinkConfig {
    double data_rate_per_wavelength_bps = 16e9;
    int logical_links = 16;
    int waveguides = 6;
    double length_m = 0.07;
    int stride = 1;
    double injection_rate = 0.1;
};

// Modulator operating point chosen by the optimizer.
struct ModulatorTuning {
    double insertion_loss_db = 0.01;
    double extinction_ratio_db = 10.0;
};

// Quantities derived from an MwmrLinkConfig.
//
// `wavelengths_per_waveguide_cap` is the FSR-limited channel capacity
// (aggregate rate / D). `wavelengths_per_waveguide` is the number of
// channels actually populated once E logical links are spread over W
// waveguides (E * wavelengths_per_link / W, fractional when the links do
// not divide evenly). Ring counts and the loss budget follow the populated
// figure; the capacity bounds the legal W range.
struct LinkGeometry {
    int sites = 0;
    int wavelengths_per_waveguide_cap = 0;
    int wavelengths_per_link = 0;
    int links_per_waveguide = 0;
    double wavelengths_per_waveguide = 0.0;
    int total_wavelengths = 0; // E * wavelengths_per_link
    long long total_rings = 0; // sites * E * wavelengths_per_link * 2
};

enum class TuningMode { FullFsr, BitReshuffle };

// Power split of one link direction at a given operating point, both in
// watts and in pJ/bit referred to the delivered bit rate
// (injection_rate * E * logical link rate).
struct PowerBreakdown {
    double laser_w = 0.0;
    double mrr_heating_w = 0.0;
    double leakage_w = 0.0;
    double dynamic_w = 0.0;
    double delivered_bps = 0.0;

    double laser_pj = 0.0;
    double mrr_heating_pj = 0.0;
    double leakage_pj = 0.0;
    double dynamic_pj = 0.0;
    double total_pj = 0.0;

    double static_w() const { return laser_w + mrr_heating_w + leakage_w; }
};

// Geometry accounting. Throws ConfigError for non-integer site or
// wavelength counts and W outside [ceil(E/4), capacity].
LinkGeometry derive_geometry(const MwmrLinkConfig& cfg, const PhotonicTechParams& tech);

// Worst-case wavelength loss budget: one coupler, the full waveguide run,
// every ring on the waveguide except its own drop ring
// (2 * wavelengths_per_waveguide * sites - 1 through-rings), the modulator
// insertion loss, the drop filter, and the detector.
double worst_case_loss_db(const MwmrLinkConfig& cfg, const PhotonicTechParams& tech,
                          const ModulatorTuning& tuning);
double worst_case_loss_db(const LinkGeometry& geom, double length_m,
                          const PhotonicTechParams& tech, const ModulatorTuning& tuning);

// 10 * log10((r + 1) / (r - 1)) with r the linear extinction ratio.
double extinction_ratio_penalty_db(double extinction_ratio_db);

// Optical power the receiver needs for the target BER at the given rate.
double required_receiver_power_w(const PhotonicTechParams& tech, const ModulatorTuning& tuning,
                                 double data_rate_bps);

// Wall-plug laser power for one wavelength closing the given loss budget.
double laser_power_per_wavelength_w(double loss_db, double required_receiver_w,
                                    double laser_efficiency);

// Total wall-plug laser power across all populated wavelengths.
// Throws InfeasibleDesignError when any waveguide exceeds the laser ceiling.
double laser_power_w(const MwmrLinkConfig& cfg, const PhotonicTechParams& tech,
                     const ModulatorTuning& tuning);

// Heater power for one ring. Full-FSR tuning must cover the whole FSR
// (optionally clamped to the temperature range); bit reshuffling only the
// ring's own channel band, FSR / wavelengths_on_waveguide.
double trimming_power_per_ring_w(double wavelengths_on_waveguide,
                                 const PhotonicTechParams& tech, TuningMode mode);

// Total heater power over all rings of the link. In bit-reshuffle mode this
// reduces to sites * W * 2 * FSR / (tuning_eff * heating_eff), independent
// of the wavelength count.
double trimming_power_w(const MwmrLinkConfig& cfg, const PhotonicTechParams& tech,
                        TuningMode mode);

// Transceiver electronics energy per transferred bit (serializer, driver,
// receiver, modulator switching).
double electronics_dynamic_pj_per_bit(const MwmrLinkConfig& cfg, const PhotonicTechParams& tech,
                                      const ModulatorTuning& tuning);

// Modulator switching power alone, in watts at the delivered bit rate; this
// is the dynamic term the modulator optimizer trades against laser power.
double modulator_dynamic_power_w(const MwmrLinkConfig& cfg, const PhotonicTechParams& tech,
                                 const ModulatorTuning& tuning);

// Grid search over insertion loss x extinction ratio (log-spaced 25x25 over
// [0.01, 10] dB) minimizing laser power + modulator dynamic power.
// Deterministic tie-break: lowest insertion loss, then lowest extinction
// ratio. Infeasible grid points (laser ceiling) are skipped; if every point
// is infeasible the least-loss corner is returned and the caller's
// energy_per_bit will raise the infeasibility.
ModulatorTuning optimize_modulator(const MwmrLinkConfig& cfg, const PhotonicTechParams& tech);

// Full power breakdown at the operating point. Static components are
// amortized over the delivered bit rate; trimming uses bit reshuffling.
// Throws InfeasibleDesignError (laser ceiling) or ConfigError (zero
// injection rate).
PowerBreakdown energy_per_bit(const MwmrLinkConfig& cfg, const PhotonicTechParams& tech,
                              const ModulatorTuning& tuning);

// End-to-end photonic link latency: driver + E-O + O-E + amplifier +
// propagation * length.
double link_latency_ps(double length_mm, const PhotonicTechParams& tech);

// ceil(latency / clock period), floored at one cycle.
int photonic_hop_cycles(double length_mm, const PhotonicTechParams& tech, double clock_hz);

} // namespace snoc

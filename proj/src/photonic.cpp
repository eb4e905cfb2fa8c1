#include "snoc/photonic.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "snoc/error.hpp"

namespace snoc {

namespace {

bool is_close_to_integer(double v, double tol = 1e-9) {
    return std::abs(v - std::round(v)) < tol;
}

double dbm_to_w(double dbm) { return 1e-3 * std::pow(10.0, dbm / 10.0); }

} // namespace

void PhotonicTechParams::validate() const {
    auto nonneg = [](double v, const char* name) {
        if (v < 0.0) throw ConfigError(std::string(name) + " must be >= 0");
    };
    auto positive = [](double v, const char* name) {
        if (v <= 0.0) throw ConfigError(std::string(name) + " must be > 0");
    };
    nonneg(waveguide_loss_db_per_m, "waveguide_loss_db_per_m");
    nonneg(coupler_loss_db, "coupler_loss_db");
    nonneg(bending_loss_db, "bending_loss_db");
    nonneg(ring_through_loss_db, "ring_through_loss_db");
    nonneg(ring_drop_loss_db, "ring_drop_loss_db");
    nonneg(detector_loss_db, "detector_loss_db");
    positive(laser_efficiency, "laser_efficiency");
    positive(fsr_hz, "fsr_hz");
    positive(tuning_efficiency_hz_per_k, "tuning_efficiency_hz_per_k");
    positive(heating_efficiency_k_per_mw, "heating_efficiency_k_per_mw");
    positive(temp_range_k, "temp_range_k");
    positive(responsivity_a_per_w, "responsivity_a_per_w");
    positive(aggregate_waveguide_rate_bps, "aggregate_waveguide_rate_bps");
    positive(logical_link_rate_bps, "logical_link_rate_bps");
    positive(hop_length_mm, "hop_length_mm");
    positive(sensitivity_reference_rate_bps, "sensitivity_reference_rate_bps");
    double ratio = aggregate_waveguide_rate_bps / logical_link_rate_bps;
    if (!is_close_to_integer(ratio))
        throw ConfigError("aggregate waveguide rate must be an integer multiple of the "
                          "logical link rate");
}

PhotonicTechParams PhotonicTechParams::from_config(const KeyValueConfig& cfg) {
    PhotonicTechParams p;
    const std::string s = "photonics.";
    p.waveguide_loss_db_per_m = cfg.get_double(s + "waveguide_loss_db_per_m", p.waveguide_loss_db_per_m);
    p.coupler_loss_db = cfg.get_double(s + "coupler_loss_db", p.coupler_loss_db);
    p.bending_loss_db = cfg.get_double(s + "waveguide_bending_loss_db", p.bending_loss_db);
    p.ring_through_loss_db = cfg.get_double(s + "ring_through_loss_db", p.ring_through_loss_db);
    p.ring_drop_loss_db = cfg.get_double(s + "ring_drop_loss_db", p.ring_drop_loss_db);
    p.detector_loss_db = cfg.get_double(s + "detector_loss_db", p.detector_loss_db);
    p.laser_efficiency = cfg.get_double(s + "laser_efficiency", p.laser_efficiency);
    p.ring_area_um2 = cfg.get_double(s + "ring_area_um2", p.ring_area_um2);
    p.fsr_hz = cfg.get_double(s + "fsr_hz", p.fsr_hz);
    p.tuning_efficiency_hz_per_k =
        cfg.get_double(s + "ring_tuning_efficiency_hz_per_k", p.tuning_efficiency_hz_per_k);
    p.heating_efficiency_k_per_mw =
        cfg.get_double(s + "ring_heating_efficiency_k_per_mw", p.heating_efficiency_k_per_mw);
    p.temp_range_k = cfg.get_double(s + "temperature_range_k", p.temp_range_k);
    p.clamp_full_fsr_to_temp_range =
        cfg.get_bool(s + "clamp_full_fsr_to_temp_range", p.clamp_full_fsr_to_temp_range);
    p.responsivity_a_per_w = cfg.get_double(s + "responsivity_a_per_w", p.responsivity_a_per_w);
    p.target_ber = cfg.get_double(s + "target_ber", p.target_ber);
    p.detector_sensitivity_dbm =
        cfg.get_double(s + "detector_sensitivity_dbm", p.detector_sensitivity_dbm);
    p.sensitivity_reference_rate_bps =
        cfg.get_double(s + "sensitivity_reference_rate_bps", p.sensitivity_reference_rate_bps);
    p.sensitivity_rate_exponent =
        cfg.get_double(s + "sensitivity_rate_exponent", p.sensitivity_rate_exponent);
    p.laser_ceiling_w_per_waveguide =
        cfg.get_double(s + "laser_ceiling_w_per_waveguide", p.laser_ceiling_w_per_waveguide);
    p.modulator_driver_ps = cfg.get_double(s + "modulator_driver_latency_ps", p.modulator_driver_ps);
    p.modulator_delay_ps = cfg.get_double(s + "modulator_delay_ps", p.modulator_delay_ps);
    p.photodetector_delay_ps = cfg.get_double(s + "photodetector_delay_ps", p.photodetector_delay_ps);
    p.amplifier_delay_ps = cfg.get_double(s + "receiver_amplifier_ps", p.amplifier_delay_ps);
    p.propagation_ps_per_mm = cfg.get_double(s + "link_propagation_ps_per_mm", p.propagation_ps_per_mm);
    p.aggregate_waveguide_rate_bps =
        cfg.get_double(s + "aggregate_waveguide_rate_bps", p.aggregate_waveguide_rate_bps);
    p.logical_link_rate_bps = cfg.get_double(s + "logical_link_rate_bps", p.logical_link_rate_bps);
    p.hop_length_mm = cfg.get_double(s + "hop_length_mm", p.hop_length_mm);
    p.serializer_pj_per_bit = cfg.get_double(s + "serializer_pj_per_bit", p.serializer_pj_per_bit);
    p.driver_pj_per_bit = cfg.get_double(s + "driver_pj_per_bit", p.driver_pj_per_bit);
    p.receiver_pj_per_bit = cfg.get_double(s + "receiver_pj_per_bit", p.receiver_pj_per_bit);
    p.modulator_dyn_pj_per_bit_per_db =
        cfg.get_double(s + "modulator_dyn_pj_per_bit_per_db", p.modulator_dyn_pj_per_bit_per_db);
    p.leakage_per_site_w = cfg.get_double(s + "leakage_per_site_w", p.leakage_per_site_w);
    p.validate();
    return p;
}

LinkGeometry derive_geometry(const MwmrLinkConfig& cfg, const PhotonicTechParams& tech) {
    tech.validate();
    if (cfg.data_rate_per_wavelength_bps <= 0.0)
        throw ConfigError("data rate per wavelength must be > 0");
    if (cfg.logical_links <= 0) throw ConfigError("logical link count must be > 0");
    if (cfg.waveguides <= 0) throw ConfigError("waveguide count must be > 0");
    if (cfg.length_m <= 0.0) throw ConfigError("waveguide length must be > 0");
    if (cfg.stride <= 0) throw ConfigError("stride must be > 0");

    double cap = tech.aggregate_waveguide_rate_bps / cfg.data_rate_per_wavelength_bps;
    if (!is_close_to_integer(cap))
        throw ConfigError("wavelengths per waveguide (aggregate rate / D) is not an integer");
    double wpl = tech.logical_link_rate_bps / cfg.data_rate_per_wavelength_bps;
    if (!is_close_to_integer(wpl))
        throw ConfigError("wavelengths per logical link (link rate / D) is not an integer");

    double sites_f = cfg.length_m / (tech.hop_length_m() * cfg.stride);
    if (!is_close_to_integer(sites_f, 1e-6) || sites_f < 0.5)
        throw ConfigError("length / (hop length * stride) must be a positive integer");

    LinkGeometry g;
    g.sites = static_cast<int>(std::llround(sites_f));
    g.wavelengths_per_waveguide_cap = static_cast<int>(std::llround(cap));
    g.wavelengths_per_link = static_cast<int>(std::llround(wpl));
    g.links_per_waveguide =
        std::min(4, g.wavelengths_per_waveguide_cap / g.wavelengths_per_link);

    int w_min = (cfg.logical_links + 3) / 4; // at most 4 logical links per waveguide
    if (cfg.waveguides < w_min || cfg.waveguides > g.wavelengths_per_waveguide_cap)
        throw ConfigError("waveguide count " + std::to_string(cfg.waveguides) +
                          " outside [" + std::to_string(w_min) + ", " +
                          std::to_string(g.wavelengths_per_waveguide_cap) + "]");

    g.total_wavelengths = cfg.logical_links * g.wavelengths_per_link;
    g.wavelengths_per_waveguide =
        static_cast<double>(g.total_wavelengths) / cfg.waveguides;
    // One modulator and one detector ring per populated wavelength per
    // waveguide per site.
    g.total_rings = 2LL * g.sites * g.total_wavelengths;
    return g;
}

double worst_case_loss_db(const LinkGeometry& geom, double length_m,
                          const PhotonicTechParams& tech, const ModulatorTuning& tuning) {
    // The worst-case wavelength passes every ring on its waveguide except
    // its own drop ring.
    double through_rings = 2.0 * geom.wavelengths_per_waveguide * geom.sites - 1.0;
    return tech.coupler_loss_db + tech.waveguide_loss_db_per_m * length_m +
           tech.bending_loss_db + tech.ring_through_loss_db * through_rings +
           tuning.insertion_loss_db + tech.ring_drop_loss_db + tech.detector_loss_db;
}

double worst_case_loss_db(const MwmrLinkConfig& cfg, const PhotonicTechParams& tech,
                          const ModulatorTuning& tuning) {
    return worst_case_loss_db(derive_geometry(cfg, tech), cfg.length_m, tech, tuning);
}

double extinction_ratio_penalty_db(double extinction_ratio_db) {
    if (extinction_ratio_db <= 0.0)
        throw ConfigError("extinction ratio penalty diverges for <= 0 dB");
    double r = std::pow(10.0, extinction_ratio_db / 10.0);
    return 10.0 * std::log10((r + 1.0) / (r - 1.0));
}

double required_receiver_power_w(const PhotonicTechParams& tech, const ModulatorTuning& tuning,
                                 double data_rate_bps) {
    double base_w = dbm_to_w(tech.detector_sensitivity_dbm +
                             extinction_ratio_penalty_db(tuning.extinction_ratio_db));
    double rate_scale = std::pow(data_rate_bps / tech.sensitivity_reference_rate_bps,
                                 tech.sensitivity_rate_exponent);
    return base_w * rate_scale;
}

double laser_power_per_wavelength_w(double loss_db, double required_receiver_w,
                                    double laser_efficiency) {
    return required_receiver_w * std::pow(10.0, loss_db / 10.0) / laser_efficiency;
}

double laser_power_w(const MwmrLinkConfig& cfg, const PhotonicTechParams& tech,
                     const ModulatorTuning& tuning) {
    LinkGeometry geom = derive_geometry(cfg, tech);
    double loss = worst_case_loss_db(geom, cfg.length_m, tech, tuning);
    double req = required_receiver_power_w(tech, tuning, cfg.data_rate_per_wavelength_bps);
    double per_wavelength = laser_power_per_wavelength_w(loss, req, tech.laser_efficiency);
    double per_waveguide = per_wavelength * geom.wavelengths_per_waveguide;
    if (!(per_waveguide <= tech.laser_ceiling_w_per_waveguide))
        throw InfeasibleDesignError("laser power per waveguide " + std::to_string(per_waveguide) +
                                    " W exceeds ceiling at loss " + std::to_string(loss) + " dB");
    return per_wavelength * geom.total_wavelengths;
}

double trimming_power_per_ring_w(double wavelengths_on_waveguide,
                                 const PhotonicTechParams& tech, TuningMode mode) {
    double band_hz;
    if (mode == TuningMode::FullFsr) {
        band_hz = tech.fsr_hz;
    } else {
        if (wavelengths_on_waveguide <= 0.0)
            throw ConfigError("bit reshuffling needs a positive wavelength count");
        band_hz = tech.fsr_hz / wavelengths_on_waveguide;
    }
    double temp_k = band_hz / tech.tuning_efficiency_hz_per_k;
    if (mode == TuningMode::FullFsr && tech.clamp_full_fsr_to_temp_range)
        temp_k = std::min(temp_k, tech.temp_range_k);
    return temp_k / tech.heating_efficiency_k_per_mw * 1e-3;
}

double trimming_power_w(const MwmrLinkConfig& cfg, const PhotonicTechParams& tech,
                        TuningMode mode) {
    LinkGeometry geom = derive_geometry(cfg, tech);
    double per_ring = trimming_power_per_ring_w(geom.wavelengths_per_waveguide, tech, mode);
    return per_ring * static_cast<double>(geom.total_rings);
}

double electronics_dynamic_pj_per_bit(const MwmrLinkConfig& cfg, const PhotonicTechParams& tech,
                                      const ModulatorTuning& tuning) {
    double rate_ratio = cfg.data_rate_per_wavelength_bps / tech.sensitivity_reference_rate_bps;
    return tech.serializer_pj_per_bit / rate_ratio + tech.driver_pj_per_bit * rate_ratio +
           tech.receiver_pj_per_bit +
           tech.modulator_dyn_pj_per_bit_per_db * tuning.insertion_loss_db * rate_ratio;
}

double modulator_dynamic_power_w(const MwmrLinkConfig& cfg, const PhotonicTechParams& tech,
                                 const ModulatorTuning& tuning) {
    double rate_ratio = cfg.data_rate_per_wavelength_bps / tech.sensitivity_reference_rate_bps;
    double pj_per_bit = tech.modulator_dyn_pj_per_bit_per_db * tuning.insertion_loss_db * rate_ratio;
    double delivered_bps = cfg.injection_rate * cfg.logical_links * tech.logical_link_rate_bps;
    return pj_per_bit * 1e-12 * delivered_bps;
}

ModulatorTuning optimize_modulator(const MwmrLinkConfig& cfg, const PhotonicTechParams& tech) {
    constexpr int kGridPoints = 25;
    constexpr double kLowDb = 0.01;
    constexpr double kHighDb = 10.0;

    LinkGeometry geom = derive_geometry(cfg, tech);
    // Loss budget without the modulator insertion term; each grid point adds
    // its own insertion loss back.
    double base_loss = worst_case_loss_db(geom, cfg.length_m, tech, ModulatorTuning{0.0, 1.0});

    double grid[kGridPoints];
    double log_lo = std::log10(kLowDb), log_hi = std::log10(kHighDb);
    for (int i = 0; i < kGridPoints; ++i)
        grid[i] = std::pow(10.0, log_lo + (log_hi - log_lo) * i / (kGridPoints - 1));

    ModulatorTuning best{grid[0], grid[0]};
    double best_objective = 0.0;
    bool have_best = false;
    double ceiling_total =
        tech.laser_ceiling_w_per_waveguide / geom.wavelengths_per_waveguide *
        geom.total_wavelengths;

    for (int ei = 0; ei < kGridPoints; ++ei) {
        for (int ii = 0; ii < kGridPoints; ++ii) {
            ModulatorTuning t{grid[ii], grid[ei]};
            double loss = base_loss + t.insertion_loss_db;
            double req = required_receiver_power_w(tech, t, cfg.data_rate_per_wavelength_bps);
            double laser = laser_power_per_wavelength_w(loss, req, tech.laser_efficiency) *
                           geom.total_wavelengths;
            if (laser > ceiling_total) continue; // infeasible grid point
            double objective = laser + modulator_dynamic_power_w(cfg, tech, t);
            bool better = !have_best || objective < best_objective;
            if (!better && objective == best_objective) {
                better = t.insertion_loss_db < best.insertion_loss_db ||
                         (t.insertion_loss_db == best.insertion_loss_db &&
                          t.extinction_ratio_db < best.extinction_ratio_db);
            }
            if (better) {
                best = t;
                best_objective = objective;
                have_best = true;
            }
        }
    }
    if (!have_best) {
        // Every grid point blows the laser ceiling; report the least-loss
        // corner so the caller's energy evaluation raises the error.
        return ModulatorTuning{grid[0], grid[kGridPoints - 1]};
    }
    return best;
}

PowerBreakdown energy_per_bit(const MwmrLinkConfig& cfg, const PhotonicTechParams& tech,
                              const ModulatorTuning& tuning) {
    if (cfg.injection_rate <= 0.0 || cfg.injection_rate > 1.0)
        throw ConfigError("injection rate must be in (0, 1]");
    LinkGeometry geom = derive_geometry(cfg, tech);

    PowerBreakdown b;
    b.delivered_bps = cfg.injection_rate * cfg.logical_links * tech.logical_link_rate_bps;
    b.laser_w = laser_power_w(cfg, tech, tuning);
    b.mrr_heating_w = trimming_power_w(cfg, tech, TuningMode::BitReshuffle);
    b.leakage_w = tech.leakage_per_site_w * geom.sites;
    b.dynamic_pj = electronics_dynamic_pj_per_bit(cfg, tech, tuning);
    b.dynamic_w = b.dynamic_pj * 1e-12 * b.delivered_bps;

    auto to_pj = [&](double watts) { return watts / b.delivered_bps * 1e12; };
    b.laser_pj = to_pj(b.laser_w);
    b.mrr_heating_pj = to_pj(b.mrr_heating_w);
    b.leakage_pj = to_pj(b.leakage_w);
    b.total_pj = b.laser_pj + b.mrr_heating_pj + b.leakage_pj + b.dynamic_pj;
    return b;
}

double link_latency_ps(double length_mm, const PhotonicTechParams& tech) {
    if (length_mm < 0.0) throw ConfigError("link length must be >= 0");
    return tech.modulator_driver_ps + tech.modulator_delay_ps + tech.photodetector_delay_ps +
           tech.amplifier_delay_ps + tech.propagation_ps_per_mm * length_mm;
}

int photonic_hop_cycles(double length_mm, const PhotonicTechParams& tech, double clock_hz) {
    if (clock_hz <= 0.0) throw ConfigError("clock frequency must be > 0");
    double period_ps = 1e12 / clock_hz;
    double cycles = std::ceil(link_latency_ps(length_mm, tech) / period_ps);
    return std::max(1, static_cast<int>(cycles));
}

} // namespace snoc

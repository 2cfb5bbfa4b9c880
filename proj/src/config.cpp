#include "cavitymod/config.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <stdexcept>

#include "cavitymod/rng.hpp"

namespace cavitymod {

void ExperimentConfig::validate() const {
    panel().validate();
    link().validate();
    detector().validate();
    ppm().validate();
    motion().validate();
    if (volume_m3 <= 0.0 || tau_s <= 0.0) {
        throw std::invalid_argument("config: volume and tau must be positive");
    }
    if (mode_band_excess < 0.0) {
        throw std::invalid_argument("config: mode_band_excess must be >= 0");
    }
    if (!(snr_db > -100.0)) {
        throw std::invalid_argument("config: snr_db out of range");
    }
    if (!seed) {
        throw std::invalid_argument(
            "config: seed is required (set it in the file or pass --seed)");
    }
    if (n_frames < 2) {
        throw std::invalid_argument("config: n_frames must be at least 2");
    }
    for (const std::size_t f : switch_frames) {
        if (f == 0 || f >= n_frames) {
            throw std::invalid_argument(
                "config: switch_frames must lie in [1, n_frames)");
        }
    }
    if (flip_counts.empty() || seeds_per_point < 2) {
        throw std::invalid_argument(
            "config: psd sweep needs flip counts and at least 2 seeds per "
            "point");
    }
    for (const std::size_t c : flip_counts) {
        if (c > unit_count) {
            throw std::invalid_argument(
                "config: cannot flip more units than the panel has");
        }
    }
}

double ExperimentConfig::band_lo() const {
    return kTwoPi *
           (center_frequency_hz - 0.5 * bandwidth_hz * (1.0 + mode_band_excess));
}

double ExperimentConfig::band_hi() const {
    return kTwoPi *
           (center_frequency_hz + 0.5 * bandwidth_hz * (1.0 + mode_band_excess));
}

double ExperimentConfig::resolved_kappa() const {
    if (kappa_rad_per_s > 0.0) return kappa_rad_per_s;
    const double modes =
        mode_count(band_hi(), volume_m3) - mode_count(band_lo(), volume_m3);
    const double spacing = (band_hi() - band_lo()) / modes;
    return spacing / std::sqrt(static_cast<double>(unit_count));
}

double ExperimentConfig::frame_duration_s() const {
    return static_cast<double>(n_samples) / sample_rate_hz;
}

CavityGeometry ExperimentConfig::geometry() const {
    CavityGeometry g;
    g.volume = volume_m3;
    g.tau = tau_s;
    g.a0 = a0;
    g.lambda = kSpeedOfLight / center_frequency_hz;
    return g;
}

RisPanel ExperimentConfig::panel() const {
    RisPanel p;
    p.unit_count = unit_count;
    p.unit_area = unit_area_m2;
    p.delta_phi = delta_phi_rad;
    p.lambda = kSpeedOfLight / center_frequency_hz;
    p.kappa = resolved_kappa();
    return p;
}

LfmConfig ExperimentConfig::link() const {
    LfmConfig c;
    c.n_samples = n_samples;
    c.sample_rate = sample_rate_hz;
    c.bandwidth = bandwidth_hz;
    c.center_frequency = center_frequency_hz;
    return c;
}

PulseDetectorConfig ExperimentConfig::detector() const {
    PulseDetectorConfig d;
    d.eta = eta;
    d.window = window;
    d.calibration_frames = calibration_frames;
    return d;
}

PpmConfig ExperimentConfig::ppm() const {
    PpmConfig p;
    p.m_ary = m_ary;
    p.min_gap = min_gap;
    return p;
}

ScattererMotion ExperimentConfig::motion() const {
    return resolve_motion_preset(motion_preset, drift_rate_rad_per_s,
                                 phase_drift_rate_rad);
}

ChannelRealization ExperimentConfig::realization(
    std::uint64_t ensemble_seed, std::uint64_t channel_seed) const {
    EigenmodeEnsemble ens =
        sample_ensemble(ensemble_seed, geometry(), band_lo(), band_hi(),
                        alpha_sigma);
    return ChannelRealization(std::move(ens), geometry(), frame_duration_s(),
                              n_samples, sample_rate_hz, center_frequency_hz,
                              channel_seed);
}

ScattererMotion resolve_motion_preset(const std::string& name,
                                      double drift_rate,
                                      double phase_drift_rate) {
    ScattererMotion m;
    if (name == "stationary") {
        m.drift_rate = 0.0;
        m.phase_drift_rate = 0.0;
    } else if (name == "walking") {
        m.drift_rate = 1e4;
        m.phase_drift_rate = 0.01;
    } else if (name == "running") {
        m.drift_rate = 3e5;
        m.phase_drift_rate = 0.05;
    } else if (name == "custom") {
        m.drift_rate = drift_rate;
        m.phase_drift_rate = phase_drift_rate;
    } else {
        throw std::invalid_argument("config: unknown motion preset '" + name +
                                    "'");
    }
    return m;
}

nlohmann::json ExperimentConfig::resolved() const {
    nlohmann::json doc;
    doc["scenario"] = scenario;
    doc["volume_m3"] = volume_m3;
    doc["tau_s"] = tau_s;
    doc["a0"] = a0;
    doc["alpha_sigma"] = alpha_sigma;
    doc["mode_band_excess"] = mode_band_excess;
    doc["unit_count"] = unit_count;
    doc["unit_area_m2"] = unit_area_m2;
    doc["delta_phi_rad"] = delta_phi_rad;
    doc["kappa_rad_per_s"] = resolved_kappa();
    doc["n_samples"] = n_samples;
    doc["sample_rate_hz"] = sample_rate_hz;
    doc["bandwidth_hz"] = bandwidth_hz;
    doc["center_frequency_hz"] = center_frequency_hz;
    if (eta) {
        doc["eta"] = *eta;
    } else {
        doc["eta"] = "auto";
    }
    doc["window"] = window;
    doc["calibration_frames"] = calibration_frames;
    doc["m_ary"] = m_ary;
    doc["min_gap"] = min_gap;
    doc["start_frame"] = start_frame;
    doc["motion_preset"] = motion_preset;
    const ScattererMotion m = motion();
    doc["drift_rate_rad_per_s"] = m.drift_rate;
    doc["phase_drift_rate_rad"] = m.phase_drift_rate;
    if (std::isinf(snr_db)) {
        doc["snr_db"] = "inf";
    } else {
        doc["snr_db"] = snr_db;
    }
    doc["seed"] = seed ? *seed : 0;
    doc["n_frames"] = n_frames;
    doc["payload_bytes"] = payload_bytes;
    doc["input_file"] = input_file;
    doc["switch_frames"] = switch_frames;
    doc["flip_counts"] = flip_counts;
    doc["seeds_per_point"] = seeds_per_point;
    doc["band_lo_rad_per_s"] = band_lo();
    doc["band_hi_rad_per_s"] = band_hi();
    doc["frame_duration_s"] = frame_duration_s();
    return doc;
}

namespace {

double parse_snr(const nlohmann::json& v) {
    if (v.is_string()) {
        if (v.get<std::string>() == "inf") {
            return std::numeric_limits<double>::infinity();
        }
        throw std::invalid_argument("config: snr_db must be a number or 'inf'");
    }
    return v.get<double>();
}

}  // namespace

ExperimentConfig config_from_json(const nlohmann::json& doc) {
    ExperimentConfig cfg;
    if (!doc.is_object()) {
        throw std::invalid_argument("config: top level must be an object");
    }
    for (const auto& [key, value] : doc.items()) {
        if (key == "scenario") cfg.scenario = value.get<std::string>();
        else if (key == "volume_m3") cfg.volume_m3 = value.get<double>();
        else if (key == "tau_s") cfg.tau_s = value.get<double>();
        else if (key == "a0") cfg.a0 = value.get<double>();
        else if (key == "alpha_sigma") cfg.alpha_sigma = value.get<double>();
        else if (key == "mode_band_excess")
            cfg.mode_band_excess = value.get<double>();
        else if (key == "unit_count") cfg.unit_count = value.get<std::size_t>();
        else if (key == "unit_area_m2") cfg.unit_area_m2 = value.get<double>();
        else if (key == "delta_phi_rad") cfg.delta_phi_rad = value.get<double>();
        else if (key == "kappa_rad_per_s")
            cfg.kappa_rad_per_s = value.get<double>();
        else if (key == "n_samples") cfg.n_samples = value.get<std::size_t>();
        else if (key == "sample_rate_hz")
            cfg.sample_rate_hz = value.get<double>();
        else if (key == "bandwidth_hz") cfg.bandwidth_hz = value.get<double>();
        else if (key == "center_frequency_hz")
            cfg.center_frequency_hz = value.get<double>();
        else if (key == "eta") {
            if (value.is_string() && value.get<std::string>() == "auto") {
                cfg.eta.reset();
            } else {
                cfg.eta = value.get<double>();
            }
        } else if (key == "window") cfg.window = value.get<std::size_t>();
        else if (key == "calibration_frames")
            cfg.calibration_frames = value.get<std::size_t>();
        else if (key == "m_ary") cfg.m_ary = value.get<std::size_t>();
        else if (key == "min_gap") cfg.min_gap = value.get<std::size_t>();
        else if (key == "start_frame")
            cfg.start_frame = value.get<std::size_t>();
        else if (key == "motion_preset")
            cfg.motion_preset = value.get<std::string>();
        else if (key == "drift_rate_rad_per_s")
            cfg.drift_rate_rad_per_s = value.get<double>();
        else if (key == "phase_drift_rate_rad")
            cfg.phase_drift_rate_rad = value.get<double>();
        else if (key == "snr_db") cfg.snr_db = parse_snr(value);
        else if (key == "seed") cfg.seed = value.get<std::uint64_t>();
        else if (key == "n_frames") cfg.n_frames = value.get<std::size_t>();
        else if (key == "payload_bytes")
            cfg.payload_bytes = value.get<std::size_t>();
        else if (key == "input_file") cfg.input_file = value.get<std::string>();
        else if (key == "switch_frames")
            cfg.switch_frames = value.get<std::vector<std::size_t>>();
        else if (key == "flip_counts")
            cfg.flip_counts = value.get<std::vector<std::size_t>>();
        else if (key == "seeds_per_point")
            cfg.seeds_per_point = value.get<std::size_t>();
        else if (key == "band_lo_rad_per_s" || key == "band_hi_rad_per_s" ||
                 key == "frame_duration_s") {
            // derived values echoed by resolved(); recomputed, so a summary's
            // config block can be fed straight back in
        } else
            throw std::invalid_argument("config: unknown key '" + key + "'");
    }
    return cfg;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("config: cannot open '" + path + "'");
    }
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::parse_error& e) {
        throw std::runtime_error("config: '" + path + "' is not valid JSON: " +
                                 e.what());
    }
    return config_from_json(doc);
}

}  // namespace cavitymod

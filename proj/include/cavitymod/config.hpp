#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cavitymod/channel.hpp"
#include "cavitymod/eigenmode.hpp"
#include "cavitymod/modem.hpp"
#include "cavitymod/perturbation.hpp"
#include "json.hpp"

namespace cavitymod {

/// Everything one experiment run needs, with desk-scale defaults. A config
/// file (JSON, keys as in the field names) overrides only the keys it
/// names; resolved() echoes every value actually used so a run can be
/// reproduced from its summary alone.
struct ExperimentConfig {
    std::string scenario;

    // cavity and mode band
    double volume_m3 = 1.0;
    double tau_s = 1e-6;
    double a0 = 1.0;
    double alpha_sigma = 1.0;
    /// the sampled mode band extends this fraction beyond the signal
    /// bandwidth on both sides combined (0.25 keeps skirt modes in view)
    double mode_band_excess = 0.25;

    // reflecting panel
    std::size_t unit_count = 512;
    double unit_area_m2 = 0.01;
    double delta_phi_rad = kPi;
    /// 0 means: mean mode spacing / sqrt(unit_count)
    double kappa_rad_per_s = 0.0;

    // link grid
    std::size_t n_samples = 512;
    double sample_rate_hz = 25e6;
    double bandwidth_hz = 20e6;
    double center_frequency_hz = 3.3e9;

    // detector; eta unset selects auto-calibration
    std::optional<double> eta;
    std::size_t window = 1;
    std::size_t calibration_frames = 24;

    // pulse modulation
    std::size_t m_ary = 4;
    std::size_t min_gap = 2;
    std::size_t start_frame = 4;

    /// stationary | walking | running | custom
    std::string motion_preset = "walking";
    double drift_rate_rad_per_s = 0.0;      ///< used when preset is custom
    double phase_drift_rate_rad = 0.0;      ///< used when preset is custom

    // run shape
    double snr_db = 20.0;
    std::optional<std::uint64_t> seed;      ///< mandatory before running
    std::size_t n_frames = 100;
    std::size_t payload_bytes = 1024;
    std::string input_file;                 ///< roundtrip source, optional
    std::vector<std::size_t> switch_frames = {3, 7, 11, 15, 19, 28, 35, 43};

    // psd-variance sweep
    std::vector<std::size_t> flip_counts = {0,   64,  128, 192, 256,
                                            320, 384, 448, 512};
    std::size_t seeds_per_point = 24;

    void validate() const;

    double band_lo() const;  ///< rad/s
    double band_hi() const;  ///< rad/s
    double resolved_kappa() const;
    double frame_duration_s() const;

    CavityGeometry geometry() const;
    RisPanel panel() const;
    LfmConfig link() const;
    PulseDetectorConfig detector() const;
    PpmConfig ppm() const;
    ScattererMotion motion() const;

    /// Fresh ensemble plus channel state for one trial stream.
    ChannelRealization realization(std::uint64_t ensemble_seed,
                                   std::uint64_t channel_seed) const;

    /// Every value in effect, units in the key names, seed included.
    nlohmann::json resolved() const;
};

/// Preset drift rates. stationary = no motion; walking drifts well below
/// the detector's calibration margin; running straddles it so detection
/// errors appear.
ScattererMotion resolve_motion_preset(const std::string& name,
                                      double drift_rate,
                                      double phase_drift_rate);

/// Parses a JSON config file and overlays it onto the defaults. Unknown
/// keys are an error (they are always typos). snr_db accepts the string
/// "inf" for a noise-free run.
ExperimentConfig load_config(const std::string& path);
ExperimentConfig config_from_json(const nlohmann::json& doc);

}  // namespace cavitymod

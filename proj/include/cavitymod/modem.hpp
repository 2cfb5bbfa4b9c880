#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "cavitymod/channel.hpp"
#include "cavitymod/kernels.hpp"

namespace cavitymod {

/// Linear-frequency-modulation source parameters. The sample count must be a
/// power of two (radix-2 transform underneath).
struct LfmConfig {
    std::size_t n_samples = 8192;
    double sample_rate = 160e6;       ///< Hz
    double bandwidth = 100e6;         ///< Hz, swept band, <= sample_rate
    double center_frequency = 3.3e9;  ///< Hz

    double frame_duration() const {
        return static_cast<double>(n_samples) / sample_rate;
    }
    void validate() const;
};

/// Inclusive bin range holding baseband frequencies within +-bandwidth/2,
/// in the -fs/2..+fs/2 bin ordering frames use.
std::pair<std::size_t, std::size_t> occupied_bins(std::size_t n_samples,
                                                  double sample_rate,
                                                  double bandwidth);

/// Deterministic baseband chirp sweeping -bandwidth/2 to +bandwidth/2 over
/// one frame, returned as its spectrum with the occupied range annotated.
Frame lfm_frame(const LfmConfig& cfg);

/// Magnitude spectrum over the frame's occupied bins, scaled to unit
/// maximum. Throws std::invalid_argument if those bins are all zero.
std::vector<double> normalize_spectrum(const Frame& frame);

/// Warping distance between two nonnegative sequences; see
/// kernels::dtw_distance for the cost and band semantics.
inline double dtw_distance(std::span<const double> a, std::span<const double> b,
                           std::size_t window) {
    return kernels::dtw_distance(a, b, window);
}

struct PulseDetectorConfig {
    /// Decision threshold on consecutive-frame distances. Unset means
    /// auto-calibration: median + 6 * IQR of the first calibration_frames
    /// distances (floored at 1e-12 so identical frames never fire).
    std::optional<double> eta;
    /// Sakoe-Chiba half-width in bins. The default 1 absorbs single-bin
    /// peak re-quantization while keeping switch discontinuities sharp;
    /// consecutive-frame drift moves spectra by far less than a bin per
    /// frame at the frame rates used here. Explicit 0 disables banding.
    std::size_t window = 1;
    /// Length of the auto-calibration window. Wider windows stabilise the
    /// IQR estimate; schedules should place their first pulses inside it
    /// (or simply start after it) so the quiet statistics sample more than
    /// one boundary state.
    std::size_t calibration_frames = 24;

    void validate() const;
};

/// Per-frame detector output: distances[n] compares frames n-1 and n
/// (distances[0] = 0), decisions[n] = 1 iff distances[n] >= eta, and
/// pulse_indices lists the frames where decisions fire.
struct DetectorTrace {
    std::vector<double> distances;
    std::vector<std::uint8_t> decisions;
    std::vector<std::size_t> pulse_indices;
    double eta = 0.0;  ///< threshold actually applied
};

/// Runs the distance detector over a received frame sequence (>= 2 frames;
/// when eta is auto-calibrated the sequence must be longer than the
/// calibration window).
DetectorTrace detect_pulses(const std::vector<Frame>& frames,
                            const PulseDetectorConfig& cfg);

/// Gap-coded pulse position modulation alphabet: a symbol s in [0, m_ary)
/// is the gap (min_gap + s) between consecutive pulses.
struct PpmConfig {
    std::size_t m_ary = 4;    ///< power of two, >= 2
    std::size_t min_gap = 2;  ///< frames, >= 1

    std::size_t max_gap() const { return min_gap + m_ary - 1; }
    std::size_t bits_per_symbol() const;
    void validate() const;
};

/// Maps a bit string (multiple of bits_per_symbol, most significant bit of
/// each symbol first) to a codebook schedule: a start pulse, then one pulse
/// per symbol, alternating between the two library codebooks. The pair
/// should be maximally distant for detector margin. With the default
/// start_frame = 0 the start pulse coincides with the initial state at
/// frame 0; a positive start_frame delays the whole pulse train so a
/// detector can calibrate on quiet frames first and the start pulse arrives
/// as a real switch.
CodebookSchedule ppm_encode(const std::vector<std::uint8_t>& bits,
                            const PpmConfig& cfg, const Codebook& cb_first,
                            const Codebook& cb_second,
                            std::size_t start_frame = 0);

struct PpmDecodeResult {
    std::vector<std::uint8_t> bits;
    std::size_t erasures = 0;  ///< gaps outside [min_gap, max_gap]
};

/// Inverse of ppm_encode on a detector trace: consecutive pulse gaps map
/// back to symbols, clamped into the alphabet with the erasure counter
/// recording out-of-range gaps. Throws std::invalid_argument when the trace
/// holds no pulse at all ("no start of frame").
PpmDecodeResult ppm_decode(const DetectorTrace& trace, const PpmConfig& cfg);

/// Bytes to a bit vector, most significant bit first, and back. Bit count
/// must be a multiple of 8 to convert back.
std::vector<std::uint8_t> bytes_to_bits(std::span<const std::uint8_t> bytes);
std::vector<std::uint8_t> bits_to_bytes(std::span<const std::uint8_t> bits);

struct OfdmResult {
    double ber = 0.0;
    std::size_t bit_errors = 0;
    std::size_t bit_count = 0;
    std::vector<double> frame_ber;  ///< per data frame, frame s rides index s+1
};

/// QPSK-over-occupied-bins baseline rider on the same evolving channel: a
/// preamble at frame 0 yields a one-shot equalizer estimate that is never
/// refreshed, then each data frame carries 2 * occupied bits. The bit count
/// must fill an integer number of data frames. The schedule/motion semantics
/// match run_schedule (per frame: drift, scheduled switch, propagate).
OfdmResult ofdm_baseline(ChannelRealization real,
                         const CodebookSchedule& schedule,
                         const ScattererMotion& motion, const RisPanel& panel,
                         const LfmConfig& link,
                         const std::vector<std::uint8_t>& bits, double snr_db);

}  // namespace cavitymod

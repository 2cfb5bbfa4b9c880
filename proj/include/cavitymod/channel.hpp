#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <limits>
#include <vector>

#include "cavitymod/eigenmode.hpp"
#include "cavitymod/perturbation.hpp"
#include "cavitymod/rng.hpp"

namespace cavitymod {

/// One frequency-domain frame. Bins run from -sample_rate/2 up to
/// +sample_rate/2 about the center frequency (bin i sits at
/// center_frequency + (i - N/2) * sample_rate / N).
struct Frame {
    std::vector<cplx> spectrum;
    double sample_rate = 0.0;       ///< Hz
    double center_frequency = 0.0;  ///< Hz
    std::size_t frame_index = 0;
    /// Inclusive bin range the source actually occupies; receivers restrict
    /// spectral comparisons to it. Defaults to the whole frame.
    std::size_t occupied_lo = 0;
    std::size_t occupied_hi = ~std::size_t{0};

    double bin_frequency_hz(std::size_t i) const {
        const double n = static_cast<double>(spectrum.size());
        return center_frequency +
               (static_cast<double>(i) - n / 2.0) * sample_rate / n;
    }

    std::size_t occupied_end() const {
        return std::min(occupied_hi, spectrum.empty() ? 0 : spectrum.size() - 1);
    }
};

/// Gaussian random-walk rates for the uncontrolled part of the boundary.
/// Standard deviations are per frame.
struct ScattererMotion {
    double drift_rate = 0.0;        ///< eigenfrequency step std (rad/s)
    double phase_drift_rate = 0.0;  ///< phase step std (rad)
    bool enabled = true;

    void validate() const;
};

/// Codebook timeline. The entry at frame 0 is the initial panel state;
/// later entries are switches applied at the start of their frame.
struct CodebookSchedule {
    struct Entry {
        std::size_t frame_index = 0;
        Codebook codebook;
    };
    std::vector<Entry> entries;

    /// Frame indices strictly increasing, first entry at frame 0, all
    /// codebooks the same length.
    void validate() const;
};

/// The channel state between two frames: the modal ensemble, the link grid
/// it is sampled on, and the private generator driving drift, switches and
/// noise. Plain value type: copies evolve independently.
class ChannelRealization {
  public:
    ChannelRealization(EigenmodeEnsemble ensemble, CavityGeometry geom,
                       double delta_t, std::size_t n_bins, double sample_rate_hz,
                       double center_frequency_hz, std::uint64_t seed);

    const EigenmodeEnsemble& ensemble() const { return ensemble_; }
    const CavityGeometry& geometry() const { return geom_; }
    double delta_t() const { return delta_t_; }
    std::size_t n_bins() const { return n_bins_; }
    double sample_rate() const { return sample_rate_; }
    double center_frequency() const { return center_frequency_; }

    /// Replaces the ensemble and invalidates the cached spectral response.
    void set_ensemble(EigenmodeEnsemble ensemble);

    /// Channel response on the link grid, cached until the ensemble changes.
    const std::vector<cplx>& response();

    /// Per-bin complex noise variance; NaN until calibrated.
    double noise_variance() const { return noise_sigma2_; }
    double noise_snr_db() const { return noise_snr_db_; }
    void set_noise_variance(double sigma2, double snr_db);

    std::uint64_t draw() { return rng_(); }
    Rng& rng() { return rng_; }

  private:
    EigenmodeEnsemble ensemble_;
    CavityGeometry geom_;
    double delta_t_ = 0.0;
    std::size_t n_bins_ = 0;
    double sample_rate_ = 0.0;
    double center_frequency_ = 0.0;
    Rng rng_;
    std::uint64_t version_ = 0;
    std::uint64_t cached_version_ = ~0ULL;
    std::vector<cplx> cached_response_;
    double noise_sigma2_ = std::numeric_limits<double>::quiet_NaN();
    double noise_snr_db_ = std::numeric_limits<double>::quiet_NaN();
};

/// One frame of uncontrolled boundary drift: every eigenfrequency takes an
/// independent Gaussian step (std = drift_rate), every phase a Gaussian step
/// (std = phase_drift_rate), then the ensemble is re-sorted and clamped to
/// its band. Disabled or zero-rate motion returns the input bit-identically.
ChannelRealization evolve_scatterer(const ChannelRealization& real,
                                    const ScattererMotion& motion);

/// The controlled boundary discontinuity between two codebooks; delegates to
/// perturb_ensemble with a seed drawn from the realization's generator.
/// Equal codebooks return the input bit-identically.
ChannelRealization apply_codebook_switch(const ChannelRealization& real,
                                         const Codebook& cb_prev,
                                         const Codebook& cb_next,
                                         const RisPanel& panel);

/// Y = H * X per bin plus circularly-symmetric complex Gaussian noise.
/// On every carrying frame the noise variance is sized from the received
/// power so the average SNR over that frame's occupied bins equals snr_db;
/// silent frames reuse the last level (rescaled if snr_db changed) so they
/// see the same noise floor. snr_db = +infinity disables noise without
/// touching the generator. Throws std::invalid_argument if the frame grid
/// disagrees with the link grid, or if noise must be sized from an empty
/// frame before any carrying frame set the floor.
Frame propagate_frame(ChannelRealization& real, const Frame& x, double snr_db);

/// Drives the channel for n_frames: per frame, scatterer drift, then any
/// scheduled codebook switch, then propagation of the source frame. The
/// source generator must produce the same frame every call (checked; this
/// pins any received change on the boundary alone). Schedule entries beyond
/// the run length are an error.
std::vector<Frame> run_schedule(ChannelRealization real,
                                const CodebookSchedule& schedule,
                                const ScattererMotion& motion,
                                const RisPanel& panel,
                                const std::function<Frame()>& source,
                                std::size_t n_frames, double snr_db);

}  // namespace cavitymod

#include "cavitymod/channel.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "cavitymod/kernels.hpp"

namespace cavitymod {

void ScattererMotion::validate() const {
    if (!(drift_rate >= 0.0) || !std::isfinite(drift_rate)) {
        throw std::invalid_argument("motion: drift rate must be finite and >= 0");
    }
    if (!(phase_drift_rate >= 0.0) || !std::isfinite(phase_drift_rate)) {
        throw std::invalid_argument(
            "motion: phase drift rate must be finite and >= 0");
    }
}

void CodebookSchedule::validate() const {
    if (entries.empty()) {
        throw std::invalid_argument("schedule: needs an entry at frame 0");
    }
    if (entries.front().frame_index != 0) {
        throw std::invalid_argument("schedule: first entry must be at frame 0");
    }
    for (std::size_t i = 1; i < entries.size(); ++i) {
        if (entries[i].frame_index <= entries[i - 1].frame_index) {
            throw std::invalid_argument(
                "schedule: frame indices must strictly increase");
        }
        if (entries[i].codebook.units() != entries.front().codebook.units()) {
            throw std::invalid_argument("schedule: codebook lengths differ");
        }
    }
}

ChannelRealization::ChannelRealization(EigenmodeEnsemble ensemble,
                                       CavityGeometry geom, double delta_t,
                                       std::size_t n_bins, double sample_rate_hz,
                                       double center_frequency_hz,
                                       std::uint64_t seed)
    : ensemble_(std::move(ensemble)),
      geom_(geom),
      delta_t_(delta_t),
      n_bins_(n_bins),
      sample_rate_(sample_rate_hz),
      center_frequency_(center_frequency_hz),
      rng_(seed) {
    if (!(delta_t_ > 0.0)) {
        throw std::invalid_argument("realization: frame period must be positive");
    }
    if (n_bins_ == 0 || !(sample_rate_ > 0.0) || !(center_frequency_ > 0.0)) {
        throw std::invalid_argument("realization: link grid is degenerate");
    }
    ensemble_.validate();
}

void ChannelRealization::set_ensemble(EigenmodeEnsemble ensemble) {
    ensemble_ = std::move(ensemble);
    ensemble_.validate();
    ++version_;
}

const std::vector<cplx>& ChannelRealization::response() {
    if (cached_version_ != version_) {
        std::vector<double> grid(n_bins_);
        const double n = static_cast<double>(n_bins_);
        for (std::size_t i = 0; i < n_bins_; ++i) {
            const double f = center_frequency_ +
                             (static_cast<double>(i) - n / 2.0) * sample_rate_ / n;
            grid[i] = kTwoPi * f;
        }
        cached_response_.assign(n_bins_, cplx(0.0, 0.0));
        kernels::transfer_function_parallel(ensemble_.modes, geom_.a0, grid,
                                            cached_response_);
        cached_version_ = version_;
    }
    return cached_response_;
}

void ChannelRealization::set_noise_variance(double sigma2, double snr_db) {
    if (!(sigma2 >= 0.0)) {
        throw std::invalid_argument("realization: noise variance must be >= 0");
    }
    noise_sigma2_ = sigma2;
    noise_snr_db_ = snr_db;
}

ChannelRealization evolve_scatterer(const ChannelRealization& real,
                                    const ScattererMotion& motion) {
    motion.validate();
    if (!motion.enabled ||
        (motion.drift_rate == 0.0 && motion.phase_drift_rate == 0.0)) {
        return real;
    }
    ChannelRealization out = real;
    EigenmodeEnsemble ens = out.ensemble();
    std::normal_distribution<double> wstep(0.0, motion.drift_rate);
    std::normal_distribution<double> pstep(0.0, motion.phase_drift_rate);
    if (motion.drift_rate > 0.0) {
        for (Mode& m : ens.modes) {
            m.omega = std::clamp(m.omega + wstep(out.rng()), ens.band_lo,
                                 ens.band_hi);
        }
    }
    if (motion.phase_drift_rate > 0.0) {
        for (Mode& m : ens.modes) {
            double phi = std::fmod(m.phi + pstep(out.rng()), kTwoPi);
            if (phi < 0.0) phi += kTwoPi;
            if (phi >= kTwoPi) phi = 0.0;
            m.phi = phi;
        }
    }
    std::sort(ens.modes.begin(), ens.modes.end(),
              [](const Mode& a, const Mode& b) { return a.omega < b.omega; });
    out.set_ensemble(std::move(ens));
    return out;
}

ChannelRealization apply_codebook_switch(const ChannelRealization& real,
                                         const Codebook& cb_prev,
                                         const Codebook& cb_next,
                                         const RisPanel& panel) {
    if (cb_prev.hamming_distance(cb_next) == 0) return real;
    ChannelRealization out = real;
    const std::uint64_t seed = out.draw();
    out.set_ensemble(
        perturb_ensemble(out.ensemble(), cb_prev, cb_next, panel, seed));
    return out;
}

Frame propagate_frame(ChannelRealization& real, const Frame& x, double snr_db) {
    if (x.spectrum.size() != real.n_bins() ||
        x.sample_rate != real.sample_rate() ||
        x.center_frequency != real.center_frequency()) {
        throw std::invalid_argument(
            "propagate_frame: frame grid does not match the link grid");
    }
    const auto& h = real.response();
    Frame y = x;
    for (std::size_t i = 0; i < y.spectrum.size(); ++i) {
        y.spectrum[i] = h[i] * x.spectrum[i];
    }
    if (std::isinf(snr_db)) return y;

    // size the noise from this frame's received power so the occupied-bin
    // average SNR equals snr_db on every carrying frame; silent frames reuse
    // the last configured level
    double peak = 0.0;
    for (const auto& v : x.spectrum) peak = std::max(peak, std::abs(v));
    double power = 0.0;
    std::size_t occupied = 0;
    for (std::size_t i = 0; i < y.spectrum.size(); ++i) {
        if (peak > 0.0 && std::abs(x.spectrum[i]) > 1e-12 * peak) {
            power += std::norm(y.spectrum[i]);
            ++occupied;
        }
    }
    if (occupied > 0) {
        const double mean_power = power / static_cast<double>(occupied);
        real.set_noise_variance(mean_power / std::pow(10.0, snr_db / 10.0),
                                snr_db);
    } else if (std::isnan(real.noise_variance())) {
        throw std::invalid_argument(
            "propagate_frame: cannot size noise from an empty frame");
    } else if (real.noise_snr_db() != snr_db) {
        const double scale =
            std::pow(10.0, (real.noise_snr_db() - snr_db) / 10.0);
        real.set_noise_variance(real.noise_variance() * scale, snr_db);
    }
    const double sigma = std::sqrt(real.noise_variance() / 2.0);
    std::normal_distribution<double> g(0.0, sigma);
    for (auto& v : y.spectrum) {
        const double re = g(real.rng());
        const double im = g(real.rng());
        v += cplx(re, im);
    }
    return y;
}

std::vector<Frame> run_schedule(ChannelRealization real,
                                const CodebookSchedule& schedule,
                                const ScattererMotion& motion,
                                const RisPanel& panel,
                                const std::function<Frame()>& source,
                                std::size_t n_frames, double snr_db) {
    schedule.validate();
    if (schedule.entries.back().frame_index >= n_frames) {
        throw std::invalid_argument(
            "run_schedule: schedule extends beyond the run length");
    }
    const Frame reference = source();

    std::vector<Frame> out;
    out.reserve(n_frames);
    Codebook current = schedule.entries.front().codebook;
    std::size_t next_entry = 1;
    for (std::size_t n = 0; n < n_frames; ++n) {
        real = evolve_scatterer(real, motion);
        if (next_entry < schedule.entries.size() &&
            schedule.entries[next_entry].frame_index == n) {
            const Codebook& target = schedule.entries[next_entry].codebook;
            real = apply_codebook_switch(real, current, target, panel);
            current = target;
            ++next_entry;
        }
        Frame x = source();
        if (x.spectrum != reference.spectrum ||
            x.sample_rate != reference.sample_rate ||
            x.center_frequency != reference.center_frequency) {
            throw std::invalid_argument(
                "run_schedule: source must produce the same frame every call");
        }
        Frame y = propagate_frame(real, x, snr_db);
        y.frame_index = n;
        out.push_back(std::move(y));
    }
    return out;
}

}  // namespace cavitymod

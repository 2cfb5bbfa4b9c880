#include "cavitymod/modem.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "cavitymod/constants.hpp"
#include "cavitymod/signal.hpp"

namespace cavitymod {

void LfmConfig::validate() const {
    if (n_samples == 0 || !signal::is_power_of_two(n_samples)) {
        throw std::invalid_argument(
            "lfm: sample count must be a power of two");
    }
    if (!(sample_rate > 0.0) || !(bandwidth > 0.0) ||
        bandwidth > sample_rate) {
        throw std::invalid_argument(
            "lfm: need 0 < bandwidth <= sample_rate");
    }
    if (!(center_frequency > 0.0)) {
        throw std::invalid_argument("lfm: center frequency must be positive");
    }
}

std::pair<std::size_t, std::size_t> occupied_bins(std::size_t n_samples,
                                                  double sample_rate,
                                                  double bandwidth) {
    const double n = static_cast<double>(n_samples);
    const double half_span = bandwidth * n / (2.0 * sample_rate);
    const double mid = n / 2.0;
    const auto lo = static_cast<std::size_t>(
        std::max(0.0, std::ceil(mid - half_span - 1e-9)));
    auto hi = static_cast<std::size_t>(std::floor(mid + half_span + 1e-9));
    hi = std::min(hi, n_samples - 1);
    return {lo, hi};
}

Frame lfm_frame(const LfmConfig& cfg) {
    cfg.validate();
    const std::size_t n = cfg.n_samples;
    std::vector<cplx> x(n);
    // instantaneous frequency ramps -B/2 -> +B/2 over the frame, so the
    // phase is (pi B / fs) (k^2 / N - k)
    const double coef = kPi * cfg.bandwidth / cfg.sample_rate;
    for (std::size_t k = 0; k < n; ++k) {
        const double kk = static_cast<double>(k);
        const double phase = coef * (kk * kk / static_cast<double>(n) - kk);
        x[k] = cplx(std::cos(phase), std::sin(phase));
    }
    signal::fft(x);
    Frame f;
    f.spectrum = signal::fftshift(x);
    f.sample_rate = cfg.sample_rate;
    f.center_frequency = cfg.center_frequency;
    f.frame_index = 0;
    const auto [lo, hi] = occupied_bins(n, cfg.sample_rate, cfg.bandwidth);
    f.occupied_lo = lo;
    f.occupied_hi = hi;
    return f;
}

std::vector<double> normalize_spectrum(const Frame& frame) {
    if (frame.spectrum.empty()) {
        throw std::invalid_argument("normalize_spectrum: empty frame");
    }
    const std::size_t lo = frame.occupied_lo;
    const std::size_t hi = frame.occupied_end();
    if (lo > hi) {
        throw std::invalid_argument("normalize_spectrum: empty occupied range");
    }
    std::vector<double> mag(hi - lo + 1);
    double peak = 0.0;
    for (std::size_t i = lo; i <= hi; ++i) {
        mag[i - lo] = std::abs(frame.spectrum[i]);
        peak = std::max(peak, mag[i - lo]);
    }
    if (peak == 0.0) {
        throw std::invalid_argument("normalize_spectrum: all-zero frame");
    }
    for (auto& v : mag) v /= peak;
    return mag;
}

void PulseDetectorConfig::validate() const {
    if (eta && (!(*eta > 0.0) || !std::isfinite(*eta))) {
        throw std::invalid_argument("detector: eta must be positive and finite");
    }
    if (!eta && calibration_frames < 4) {
        throw std::invalid_argument(
            "detector: auto-calibration needs at least 4 quiet frames");
    }
}

namespace {

double interpolated_quantile(const std::vector<double>& sorted, double q) {
    const double pos = q * static_cast<double>(sorted.size() - 1);
    const auto lo = static_cast<std::size_t>(pos);
    if (lo + 1 >= sorted.size()) return sorted.back();
    const double frac = pos - static_cast<double>(lo);
    return sorted[lo] + (sorted[lo + 1] - sorted[lo]) * frac;
}

}  // namespace

DetectorTrace detect_pulses(const std::vector<Frame>& frames,
                            const PulseDetectorConfig& cfg) {
    cfg.validate();
    if (frames.size() < 2) {
        throw std::invalid_argument("detect_pulses: need at least 2 frames");
    }
    std::vector<std::vector<double>> norm(frames.size());
    for (std::size_t i = 0; i < frames.size(); ++i) {
        norm[i] = normalize_spectrum(frames[i]);
        if (norm[i].size() != norm[0].size()) {
            throw std::invalid_argument(
                "detect_pulses: frames disagree on the occupied range");
        }
    }
    std::vector<std::vector<double>> prev(frames.size() - 1), next(frames.size() - 1);
    for (std::size_t n = 1; n < frames.size(); ++n) {
        prev[n - 1] = norm[n - 1];
        next[n - 1] = norm[n];
    }
    const auto pair_d = kernels::pairwise_dtw_parallel(prev, next, cfg.window);

    DetectorTrace trace;
    trace.distances.assign(frames.size(), 0.0);
    for (std::size_t n = 1; n < frames.size(); ++n) {
        trace.distances[n] = pair_d[n - 1];
    }

    if (cfg.eta) {
        trace.eta = *cfg.eta;
    } else {
        if (frames.size() < cfg.calibration_frames + 2) {
            throw std::invalid_argument(
                "detect_pulses: sequence shorter than the calibration window");
        }
        std::vector<double> quiet(trace.distances.begin() + 1,
                                  trace.distances.begin() + 1 +
                                      static_cast<std::ptrdiff_t>(
                                          cfg.calibration_frames));
        std::sort(quiet.begin(), quiet.end());
        const double median = interpolated_quantile(quiet, 0.5);
        const double iqr = interpolated_quantile(quiet, 0.75) -
                           interpolated_quantile(quiet, 0.25);
        trace.eta = std::max(median + 6.0 * iqr, 1e-12);
    }

    trace.decisions.assign(frames.size(), 0);
    for (std::size_t n = 0; n < frames.size(); ++n) {
        if (trace.distances[n] >= trace.eta) {
            trace.decisions[n] = 1;
            trace.pulse_indices.push_back(n);
        }
    }
    return trace;
}

std::size_t PpmConfig::bits_per_symbol() const {
    std::size_t bits = 0;
    std::size_t v = m_ary;
    while (v > 1) {
        v >>= 1;
        ++bits;
    }
    return bits;
}

void PpmConfig::validate() const {
    if (m_ary < 2 || (m_ary & (m_ary - 1)) != 0) {
        throw std::invalid_argument("ppm: alphabet size must be a power of two");
    }
    if (min_gap < 1) {
        throw std::invalid_argument("ppm: minimum gap must be at least 1 frame");
    }
}

CodebookSchedule ppm_encode(const std::vector<std::uint8_t>& bits,
                            const PpmConfig& cfg, const Codebook& cb_first,
                            const Codebook& cb_second, std::size_t start_frame) {
    cfg.validate();
    if (cb_first.hamming_distance(cb_second) == 0) {
        throw std::invalid_argument("ppm_encode: library codebooks must differ");
    }
    const std::size_t bps = cfg.bits_per_symbol();
    if (bits.size() % bps != 0) {
        throw std::invalid_argument(
            "ppm_encode: bit count must be a multiple of bits per symbol");
    }
    for (const auto b : bits) {
        if (b > 1) throw std::invalid_argument("ppm_encode: bits must be 0 or 1");
    }

    CodebookSchedule sched;
    sched.entries.push_back({0, cb_first});
    // pulse 0 is the start pulse; when delayed it becomes a real switch
    std::size_t pos = start_frame;
    std::size_t pulse = 0;
    const auto book_for = [&](std::size_t k) -> const Codebook& {
        const bool odd = (k % 2) != 0;
        if (start_frame == 0) return odd ? cb_second : cb_first;
        return odd ? cb_first : cb_second;
    };
    if (start_frame > 0) {
        sched.entries.push_back({pos, book_for(pulse)});
    }
    ++pulse;
    for (std::size_t s = 0; s < bits.size(); s += bps) {
        std::size_t value = 0;
        for (std::size_t b = 0; b < bps; ++b) {
            value = (value << 1) | bits[s + b];
        }
        pos += cfg.min_gap + value;
        sched.entries.push_back({pos, book_for(pulse)});
        ++pulse;
    }
    sched.validate();
    return sched;
}

PpmDecodeResult ppm_decode(const DetectorTrace& trace, const PpmConfig& cfg) {
    cfg.validate();
    const auto& pulses = trace.pulse_indices;
    if (pulses.empty()) {
        throw std::invalid_argument("ppm_decode: no start of frame");
    }
    PpmDecodeResult out;
    const std::size_t bps = cfg.bits_per_symbol();
    for (std::size_t i = 1; i < pulses.size(); ++i) {
        const std::size_t gap = pulses[i] - pulses[i - 1];
        std::size_t value;
        if (gap < cfg.min_gap) {
            value = 0;
            ++out.erasures;
        } else if (gap > cfg.max_gap()) {
            value = cfg.m_ary - 1;
            ++out.erasures;
        } else {
            value = gap - cfg.min_gap;
        }
        for (std::size_t b = 0; b < bps; ++b) {
            out.bits.push_back(
                static_cast<std::uint8_t>((value >> (bps - 1 - b)) & 1));
        }
    }
    return out;
}

std::vector<std::uint8_t> bytes_to_bits(std::span<const std::uint8_t> bytes) {
    std::vector<std::uint8_t> bits;
    bits.reserve(bytes.size() * 8);
    for (const auto byte : bytes) {
        for (int b = 7; b >= 0; --b) {
            bits.push_back(static_cast<std::uint8_t>((byte >> b) & 1));
        }
    }
    return bits;
}

std::vector<std::uint8_t> bits_to_bytes(std::span<const std::uint8_t> bits) {
    if (bits.size() % 8 != 0) {
        throw std::invalid_argument(
            "bits_to_bytes: bit count must be a multiple of 8");
    }
    std::vector<std::uint8_t> bytes(bits.size() / 8, 0);
    for (std::size_t i = 0; i < bits.size(); ++i) {
        bytes[i / 8] = static_cast<std::uint8_t>(
            (bytes[i / 8] << 1) | (bits[i] & 1));
    }
    return bytes;
}

OfdmResult ofdm_baseline(ChannelRealization real,
                         const CodebookSchedule& schedule,
                         const ScattererMotion& motion, const RisPanel& panel,
                         const LfmConfig& link,
                         const std::vector<std::uint8_t>& bits, double snr_db) {
    link.validate();
    motion.validate();
    schedule.validate();
    if (real.n_bins() != link.n_samples ||
        real.sample_rate() != link.sample_rate ||
        real.center_frequency() != link.center_frequency) {
        throw std::invalid_argument(
            "ofdm_baseline: link grid does not match the realization");
    }
    const auto [lo, hi] =
        occupied_bins(link.n_samples, link.sample_rate, link.bandwidth);
    const std::size_t occ = hi - lo + 1;
    const std::size_t bits_per_frame = 2 * occ;
    if (bits.empty() || bits.size() % bits_per_frame != 0) {
        throw std::invalid_argument(
            "ofdm_baseline: bit count must fill whole data frames");
    }
    const std::size_t n_data = bits.size() / bits_per_frame;
    const std::size_t n_frames = 1 + n_data;
    if (schedule.entries.back().frame_index >= n_frames) {
        throw std::invalid_argument(
            "ofdm_baseline: schedule extends beyond the burst");
    }

    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    const auto blank_frame = [&] {
        Frame f;
        f.spectrum.assign(link.n_samples, cplx(0.0, 0.0));
        f.sample_rate = link.sample_rate;
        f.center_frequency = link.center_frequency;
        f.occupied_lo = lo;
        f.occupied_hi = hi;
        return f;
    };

    OfdmResult result;
    result.bit_count = bits.size();
    result.frame_ber.reserve(n_data);

    std::vector<cplx> equalizer(occ, cplx(0.0, 0.0));
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
        Frame x = blank_frame();
        if (n == 0) {
            for (std::size_t i = lo; i <= hi; ++i) {
                x.spectrum[i] = cplx(inv_sqrt2, inv_sqrt2);
            }
            Frame y = propagate_frame(real, x, snr_db);
            for (std::size_t i = lo; i <= hi; ++i) {
                equalizer[i - lo] = y.spectrum[i] / x.spectrum[i];
            }
            continue;
        }
        const std::size_t base = (n - 1) * bits_per_frame;
        for (std::size_t i = 0; i < occ; ++i) {
            const bool b0 = bits[base + 2 * i] != 0;
            const bool b1 = bits[base + 2 * i + 1] != 0;
            x.spectrum[lo + i] = cplx(b0 ? -inv_sqrt2 : inv_sqrt2,
                                      b1 ? -inv_sqrt2 : inv_sqrt2);
        }
        Frame y = propagate_frame(real, x, snr_db);
        std::size_t frame_errors = 0;
        for (std::size_t i = 0; i < occ; ++i) {
            const cplx g = equalizer[i];
            const cplx xhat =
                g == cplx(0.0, 0.0) ? cplx(0.0, 0.0) : y.spectrum[lo + i] / g;
            const bool b0 = bits[base + 2 * i] != 0;
            const bool b1 = bits[base + 2 * i + 1] != 0;
            frame_errors += (xhat.real() < 0.0) != b0;
            frame_errors += (xhat.imag() < 0.0) != b1;
        }
        result.bit_errors += frame_errors;
        result.frame_ber.push_back(static_cast<double>(frame_errors) /
                                   static_cast<double>(bits_per_frame));
    }
    result.ber = static_cast<double>(result.bit_errors) /
                 static_cast<double>(result.bit_count);
    return result;
}

}  // namespace cavitymod

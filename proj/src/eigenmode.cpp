#include "cavitymod/eigenmode.hpp"

#include <random>
#include <stdexcept>

#include "cavitymod/kernels.hpp"
#include "cavitymod/rng.hpp"

namespace cavitymod {

void EigenmodeEnsemble::validate() const {
    if (!(band_hi > band_lo) || !(band_lo > 0.0)) {
        throw std::invalid_argument("ensemble: band must satisfy 0 < lo < hi");
    }
    double prev = band_lo;
    for (const Mode& m : modes) {
        if (!(m.omega >= prev) || !(m.omega <= band_hi)) {
            throw std::invalid_argument(
                "ensemble: mode frequencies must ascend within the band");
        }
        if (!(m.tau > 0.0)) {
            throw std::invalid_argument("ensemble: decay times must be positive");
        }
        prev = m.omega;
    }
}

cplx mode_time_response(const Mode& mode, double t) {
    if (t < 0.0) return {0.0, 0.0};
    const cplx osc(std::cos(mode.omega * t), -std::sin(mode.omega * t));
    return mode.amplitude() * osc * std::exp(-t / (2.0 * mode.tau));
}

double mode_spectral_magnitude(const Mode& mode, double omega) {
    const double detune = 2.0 * mode.tau * (omega - mode.omega);
    return std::abs(mode.alpha) * mode.tau / kPi / std::sqrt(1.0 + detune * detune);
}

cplx field_time_response(const EigenmodeEnsemble& ens, double t) {
    cplx acc(0.0, 0.0);
    for (const Mode& m : ens.modes) acc += mode_time_response(m, t);
    return acc;
}

std::vector<cplx> channel_impulse_response(const EigenmodeEnsemble& ens,
                                           const CavityGeometry& geom,
                                           std::span<const double> t_grid) {
    for (std::size_t i = 1; i < t_grid.size(); ++i) {
        if (!(t_grid[i] > t_grid[i - 1])) {
            throw std::invalid_argument(
                "channel_impulse_response: time grid must ascend");
        }
    }
    std::vector<cplx> h(t_grid.size(), cplx(0.0, 0.0));
    for (std::size_t i = 0; i < t_grid.size(); ++i) {
        const double t = t_grid[i];
        if (t < 0.0) continue;
        cplx acc(0.0, 0.0);
        for (const Mode& m : ens.modes) {
            acc += m.amplitude() * cplx(std::cos(m.omega * t), std::sin(m.omega * t));
        }
        h[i] = power_delay_profile(geom.a0, geom.tau, t) * acc;
    }
    return h;
}

double mode_count(double omega, double volume) {
    const double c = kSpeedOfLight;
    return omega * omega * omega * volume / (3.0 * kPi * kPi * c * c * c);
}

double critical_volume_ratio(double lambda, double volume) {
    if (!(lambda > 0.0) || !(volume > 0.0)) {
        throw std::invalid_argument(
            "critical_volume_ratio: lambda and volume must be positive");
    }
    return 3.0 * lambda * lambda * lambda / (8.0 * kPi * volume);
}

double power_delay_profile(double a0, double tau, double t) {
    if (t < 0.0) return 0.0;
    return a0 * std::exp(-t / (2.0 * tau));
}

std::vector<cplx> transfer_function(const EigenmodeEnsemble& ens,
                                    const CavityGeometry& geom,
                                    std::span<const double> omega_grid) {
    std::vector<cplx> out(omega_grid.size());
    kernels::transfer_function_parallel(ens.modes, geom.a0, omega_grid, out);
    return out;
}

EigenmodeEnsemble sample_ensemble(std::uint64_t seed, const CavityGeometry& geom,
                                  double band_lo, double band_hi,
                                  double alpha_sigma) {
    if (!(band_hi > band_lo) || !(band_lo > 0.0)) {
        throw std::invalid_argument("sample_ensemble: band must satisfy 0 < lo < hi");
    }
    if (!(geom.volume > 0.0) || !(geom.tau > 0.0) || !(alpha_sigma > 0.0)) {
        throw std::invalid_argument(
            "sample_ensemble: volume, tau and alpha_sigma must be positive");
    }
    const double expected =
        mode_count(band_hi, geom.volume) - mode_count(band_lo, geom.volume);
    const auto count = static_cast<long long>(std::llround(expected));
    if (count < 1) {
        throw std::invalid_argument(
            "sample_ensemble: band too narrow, fewer than one mode expected");
    }
    const auto n = static_cast<std::size_t>(count);

    Rng rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::normal_distribution<double> gauss(0.0, alpha_sigma);
    std::uniform_real_distribution<double> phase(0.0, kTwoPi);

    EigenmodeEnsemble ens;
    ens.band_lo = band_lo;
    ens.band_hi = band_hi;
    ens.modes.resize(n);

    // Nearest-neighbor spacings follow the Wigner surmise; sampled by
    // inverting the CDF 1 - exp(-pi s^2 / 4), then the cumulative positions
    // are mapped affinely into the band (which preserves spacing ratios)
    // with the first and last mode pinned half a mean spacing inside the
    // edges.
    std::vector<double> pos(n, 0.0);
    for (std::size_t i = 1; i < n; ++i) {
        const double u = unit(rng);
        pos[i] = pos[i - 1] + std::sqrt(-(4.0 / kPi) * std::log(1.0 - u));
    }
    const double width = band_hi - band_lo;
    const double mean_spacing = width / static_cast<double>(n);
    const double lo = band_lo + 0.5 * mean_spacing;
    const double hi = band_hi - 0.5 * mean_spacing;
    const double span = pos.back();
    for (std::size_t i = 0; i < n; ++i) {
        const double x = span > 0.0 ? pos[i] / span : 0.5;
        ens.modes[i].omega = n > 1 ? lo + x * (hi - lo) : 0.5 * (band_lo + band_hi);
        ens.modes[i].tau = geom.tau;
    }
    for (std::size_t i = 0; i < n; ++i) ens.modes[i].alpha = gauss(rng);
    for (std::size_t i = 0; i < n; ++i) ens.modes[i].phi = phase(rng);

    ens.validate();
    return ens;
}

}  // namespace cavitymod

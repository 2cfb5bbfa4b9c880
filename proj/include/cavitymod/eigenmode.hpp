#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include "cavitymod/constants.hpp"

namespace cavitymod {

using cplx = std::complex<double>;

/// One resonant mode of a lossy cavity. The damped field of a mode is
///   E_n(t) = E_n0 e^{-i omega_n t} e^{-t/(2 tau_n)} U(t),
/// whose spectral magnitude is a Lorentzian of power FWHM 1/tau_n
/// centered on omega_n.
struct Mode {
    double omega = 0.0;  ///< angular eigenfrequency (rad/s), > 0
    double alpha = 0.0;  ///< modal coefficient (dimensionless)
    double phi = 0.0;    ///< phase-shift angle (rad), in [0, 2pi)
    double tau = 0.0;    ///< energy decay time (s), > 0

    /// Initial complex amplitude E_n0 = alpha * e^{j phi}.
    cplx amplitude() const { return alpha * cplx(std::cos(phi), std::sin(phi)); }
};

/// The modal ensemble of one boundary-condition realization: the triples
/// {alpha_n}, {phi_n}, {omega_n} (plus decay times) for all modes resonating
/// in [band_lo, band_hi].
struct EigenmodeEnsemble {
    std::vector<Mode> modes;  ///< sorted by omega ascending, all in band
    double band_lo = 0.0;     ///< rad/s
    double band_hi = 0.0;     ///< rad/s

    std::size_t mode_count() const { return modes.size(); }

    /// Throws std::invalid_argument if sortedness / in-band invariants fail.
    void validate() const;
};

/// Bulk cavity description for the statistical channel model.
struct CavityGeometry {
    double volume = 1.0;   ///< m^3
    double tau = 1e-6;     ///< average energy decay time (s)
    double a0 = 1.0;       ///< power delay profile gain
    double lambda = 0.0;   ///< center wavelength (m)
};

/// Damped single-mode field sample E_n0 e^{-i omega t} e^{-t/2tau} U(t).
cplx mode_time_response(const Mode& mode, double t);

/// Lorentzian spectral magnitude |E_n0| tau/pi / sqrt(1 + [2 tau (w - w_n)]^2).
double mode_spectral_magnitude(const Mode& mode, double omega);

/// Superposition of all mode time responses.
cplx field_time_response(const EigenmodeEnsemble& ens, double t);

/// h(t) = P(t) * sum_n alpha_n e^{j phi_n} e^{j omega_n t} on an ascending
/// time grid; samples at t < 0 are zero.
std::vector<cplx> channel_impulse_response(const EigenmodeEnsemble& ens,
                                           const CavityGeometry& geom,
                                           std::span<const double> t_grid);

/// Weyl mode-counting function N(omega) = omega^3 V / (3 pi^2 c^3).
double mode_count(double omega, double volume);

/// Volume-ratio sensitivity 3 lambda^3 / (8 pi V); the critical volume change
/// that shifts the Weyl count by one mode is ratio * V = 3 lambda^3 / (8 pi).
double critical_volume_ratio(double lambda, double volume);

/// A0 e^{-t/2tau} U(t).
double power_delay_profile(double a0, double tau, double t);

/// Angular-domain channel H(w) = A0 sum_n alpha_n e^{j phi_n} /
/// (j(w_n - w) + 1/(2 tau_n)) on the given grid. Sampled ensembles share
/// tau_n = geom.tau, recovering the single-decay-time closed form.
std::vector<cplx> transfer_function(const EigenmodeEnsemble& ens,
                                    const CavityGeometry& geom,
                                    std::span<const double> omega_grid);

/// Draws one statistical realization of the band-limited modal ensemble:
/// Weyl-count modes with Wigner-surmise spacings (affinely renormalized into
/// the band), alpha ~ N(0, alpha_sigma), phi ~ U[0, 2pi), tau = geom.tau.
/// Throws std::invalid_argument if the Weyl count rounds below one mode.
EigenmodeEnsemble sample_ensemble(std::uint64_t seed, const CavityGeometry& geom,
                                  double band_lo, double band_hi,
                                  double alpha_sigma);

}  // namespace cavitymod

#include "cavitymod/perturbation.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "cavitymod/kernels.hpp"
#include "cavitymod/rng.hpp"

namespace cavitymod {

void RectangularCavity::validate() const {
    if (!(a > 0.0) || !(b > 0.0) || !(d > 0.0)) {
        throw std::invalid_argument("cavity: edge lengths must be positive");
    }
    if (!(epsilon > 0.0) || !(mu > 0.0)) {
        throw std::invalid_argument("cavity: material constants must be positive");
    }
}

void RisPanel::validate() const {
    if (unit_count == 0) {
        throw std::invalid_argument("panel: unit count must be positive");
    }
    if (!(unit_area > 0.0)) {
        throw std::invalid_argument("panel: unit area must be positive");
    }
    if (!(delta_phi > 0.0) || delta_phi > kTwoPi) {
        throw std::invalid_argument("panel: phase step must lie in (0, 2pi]");
    }
    if (!(lambda > 0.0)) {
        throw std::invalid_argument("panel: wavelength must be positive");
    }
    if (kappa < 0.0) {
        throw std::invalid_argument("panel: jitter scale must be nonnegative");
    }
}

double rect_mode_frequency(int m, int n, int p, const RectangularCavity& cav) {
    cav.validate();
    if (m < 0 || n < 0 || p < 0 || (m == 0) + (n == 0) + (p == 0) > 1) {
        throw std::invalid_argument("nonexistent mode");
    }
    const double rm = static_cast<double>(m) / cav.a;
    const double rn = static_cast<double>(n) / cav.b;
    const double rp = static_cast<double>(p) / cav.d;
    return kPi / std::sqrt(cav.mu * cav.epsilon) *
           std::sqrt(rm * rm + rn * rn + rp * rp);
}

FieldVectors rect_mode_fields(int m, int n, int p, const RectangularCavity& cav,
                              double x, double y, double z) {
    if (n != 0 || m < 1 || p < 1) {
        throw std::invalid_argument(
            "rect_mode_fields: only the TE_m0p family is implemented");
    }
    if (x < 0.0 || x > cav.a || y < 0.0 || y > cav.b || z < 0.0 || z > cav.d) {
        throw std::invalid_argument("rect_mode_fields: point outside the cavity");
    }
    const double omega = rect_mode_frequency(m, n, p, cav);
    const double kx = static_cast<double>(m) * kPi / cav.a;
    const double kz = static_cast<double>(p) * kPi / cav.d;
    const double wm = omega * cav.mu;
    FieldVectors f;
    f.e[1] = cplx(std::sin(kx * x) * std::sin(kz * z), 0.0);
    f.h[0] = cplx(0.0, -kz / wm * std::sin(kx * x) * std::cos(kz * z));
    f.h[2] = cplx(0.0, kx / wm * std::cos(kx * x) * std::sin(kz * z));
    return f;
}

namespace {

cplx poynting_component(const FieldVectors& f, int axis) {
    const auto& e = f.e;
    const auto& h = f.h;
    switch (axis) {
        case 0: return std::conj(e[1]) * h[2] - std::conj(e[2]) * h[1];
        case 1: return std::conj(e[2]) * h[0] - std::conj(e[0]) * h[2];
        default: return std::conj(e[0]) * h[1] - std::conj(e[1]) * h[0];
    }
}

struct WallFrame {
    int normal_axis = 0;    // 0 x, 1 y, 2 z
    double normal_sign = 1; // outward normal direction along that axis
    double coord = 0.0;     // surface position along the normal axis
    double u_hi = 0.0;      // first in-plane extent
    double v_hi = 0.0;      // second in-plane extent
};

WallFrame wall_frame(const RectangularCavity& cav, Wall wall, double delta) {
    switch (wall) {
        case Wall::XMin: return {0, -1.0, delta, cav.b, cav.d};
        case Wall::XMax: return {0, 1.0, cav.a - delta, cav.b, cav.d};
        case Wall::YMin: return {1, -1.0, delta, cav.a, cav.d};
        case Wall::YMax: return {1, 1.0, cav.b - delta, cav.a, cav.d};
        case Wall::ZMin: return {2, -1.0, delta, cav.a, cav.b};
        default: return {2, 1.0, cav.d - delta, cav.a, cav.b};
    }
}

double normal_edge(const RectangularCavity& cav, Wall wall) {
    switch (wall) {
        case Wall::XMin:
        case Wall::XMax: return cav.a;
        case Wall::YMin:
        case Wall::YMax: return cav.b;
        default: return cav.d;
    }
}

}  // namespace

double eigenfrequency_shift(const RectangularCavity& cav, int m, int n, int p,
                            Wall wall, double inward_displacement) {
    cav.validate();
    if (n != 0 || m < 1 || p < 1) {
        throw std::invalid_argument(
            "eigenfrequency_shift: only the TE_m0p family is implemented");
    }
    const double edge = normal_edge(cav, wall);
    if (inward_displacement < 0.0 || inward_displacement > edge / 10.0) {
        throw std::invalid_argument(
            "eigenfrequency_shift: displacement out of validity range");
    }
    if (inward_displacement == 0.0) return 0.0;

    const WallFrame frame = wall_frame(cav, wall, inward_displacement);
    const auto point_fields = [&](double u, double v) {
        double x = 0.0, y = 0.0, z = 0.0;
        switch (frame.normal_axis) {
            case 0: x = frame.coord; y = u; z = v; break;
            case 1: y = frame.coord; x = u; z = v; break;
            default: z = frame.coord; x = u; y = v; break;
        }
        return rect_mode_fields(m, n, p, cav, x, y, z);
    };
    const auto surface_integrand = [&](double u, double v) {
        return frame.normal_sign *
               poynting_component(point_fields(u, v), frame.normal_axis);
    };
    const auto energy_density = [&](double x, double y, double z) {
        const FieldVectors f = rect_mode_fields(m, n, p, cav, x, y, z);
        double e2 = 0.0, h2 = 0.0;
        for (int i = 0; i < 3; ++i) {
            e2 += std::norm(f.e[i]);
            h2 += std::norm(f.h[i]);
        }
        return cav.epsilon * e2 + cav.mu * h2;
    };

    double denom = 0.0;
    double denom_prev = 0.0;
    for (std::size_t cells = 16; cells <= 128; cells *= 2) {
        denom = kernels::quadrature_3d_parallel(energy_density, 0.0, cav.a, 0.0,
                                                cav.b, 0.0, cav.d, cells, cells,
                                                cells);
        if (denom_prev != 0.0 &&
            std::abs(denom - denom_prev) < 1e-4 * std::abs(denom)) {
            break;
        }
        denom_prev = denom;
    }

    double shift = 0.0;
    double shift_prev = 0.0;
    bool have_prev = false;
    const double omega = rect_mode_frequency(m, n, p, cav);
    for (std::size_t cells = 32; cells <= 2048; cells *= 2) {
        const cplx integral = kernels::quadrature_2d_parallel_complex(
            surface_integrand, 0.0, frame.u_hi, 0.0, frame.v_hi, cells, cells);
        shift = (cplx(0.0, 1.0) * integral / denom).real();
        if (have_prev) {
            const double change = std::abs(shift - shift_prev);
            if (change < 1e-3 * std::abs(shift) || change < 1e-15 * omega) break;
        }
        shift_prev = shift;
        have_prev = true;
    }
    return shift;
}

Codebook::Codebook(std::size_t units) {
    if (units == 0 || units % 4 != 0) {
        throw std::invalid_argument(
            "codebook: unit count must be positive and divisible by 4");
    }
    bits_.assign(units, 0);
}

Codebook Codebook::from_hex(const std::string& hex, std::size_t units) {
    Codebook cb(units);
    if (hex.size() != units / 4) {
        throw std::invalid_argument("codebook: hex length must be units/4");
    }
    for (std::size_t i = 0; i < hex.size(); ++i) {
        const char c = hex[i];
        int v = 0;
        if (c >= '0' && c <= '9') v = c - '0';
        else if (c >= 'a' && c <= 'f') v = c - 'a' + 10;
        else if (c >= 'A' && c <= 'F') v = c - 'A' + 10;
        else throw std::invalid_argument("codebook: invalid hex digit");
        for (std::size_t j = 0; j < 4; ++j) {
            cb.bits_[4 * i + j] = (v >> (3 - j)) & 1;
        }
    }
    return cb;
}

std::string Codebook::to_hex() const {
    static const char* digits = "0123456789abcdef";
    std::string out(bits_.size() / 4, '0');
    for (std::size_t i = 0; i < out.size(); ++i) {
        int v = 0;
        for (std::size_t j = 0; j < 4; ++j) {
            v = (v << 1) | bits_[4 * i + j];
        }
        out[i] = digits[v];
    }
    return out;
}

std::size_t Codebook::hamming_distance(const Codebook& other) const {
    if (bits_.size() != other.bits_.size()) {
        throw std::invalid_argument("codebook: length mismatch");
    }
    std::size_t count = 0;
    for (std::size_t i = 0; i < bits_.size(); ++i) {
        count += bits_[i] != other.bits_[i];
    }
    return count;
}

double equivalent_displacement(double delta_phi, double lambda) {
    if (!(lambda > 0.0)) {
        throw std::invalid_argument(
            "equivalent_displacement: wavelength must be positive");
    }
    return delta_phi / kTwoPi * lambda;
}

double codebook_switch_volume(const Codebook& cb_a, const Codebook& cb_b,
                              const RisPanel& panel) {
    panel.validate();
    const double h = static_cast<double>(cb_a.hamming_distance(cb_b));
    return h * panel.unit_area *
           equivalent_displacement(panel.delta_phi, panel.lambda);
}

EigenmodeEnsemble perturb_ensemble(const EigenmodeEnsemble& ens,
                                   const Codebook& cb_a, const Codebook& cb_b,
                                   const RisPanel& panel, std::uint64_t seed) {
    panel.validate();
    if (cb_a.units() != panel.unit_count || cb_b.units() != panel.unit_count) {
        throw std::invalid_argument(
            "perturb_ensemble: codebook length does not match the panel");
    }
    const std::size_t h = cb_a.hamming_distance(cb_b);
    if (h == 0) return ens;

    EigenmodeEnsemble out = ens;
    Rng rng(seed);
    std::normal_distribution<double> jitter(
        0.0, panel.kappa * std::sqrt(static_cast<double>(h)));
    std::uniform_real_distribution<double> fresh(0.0, kTwoPi);
    const double w = static_cast<double>(h) / static_cast<double>(panel.unit_count);

    for (Mode& mode : out.modes) {
        mode.omega = std::clamp(mode.omega + jitter(rng), out.band_lo, out.band_hi);
    }
    for (Mode& mode : out.modes) {
        const double target = fresh(rng);
        const double arc =
            std::atan2(std::sin(target - mode.phi), std::cos(target - mode.phi));
        double phi = std::fmod(mode.phi + w * arc, kTwoPi);
        if (phi < 0.0) phi += kTwoPi;
        if (phi >= kTwoPi) phi = 0.0;
        mode.phi = phi;
    }
    std::sort(out.modes.begin(), out.modes.end(),
              [](const Mode& lhs, const Mode& rhs) { return lhs.omega < rhs.omega; });
    out.validate();
    return out;
}

}  // namespace cavitymod

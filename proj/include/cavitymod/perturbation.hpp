#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "cavitymod/constants.hpp"
#include "cavitymod/eigenmode.hpp"

namespace cavitymod {

/// Closed rectangular conducting box, edges a x b x d along x, y, z.
struct RectangularCavity {
    double a = 1.0;                         ///< m
    double b = 1.0;                         ///< m
    double d = 1.0;                         ///< m
    double epsilon = kVacuumPermittivity;   ///< F/m
    double mu = kVacuumPermeability;        ///< H/m

    double volume() const { return a * b * d; }
    void validate() const;
};

enum class Wall { XMin, XMax, YMin, YMax, ZMin, ZMax };

/// Complex standing-wave field components at one point.
struct FieldVectors {
    std::array<cplx, 3> e{};  ///< (Ex, Ey, Ez), V/m with max|E| = 1
    std::array<cplx, 3> h{};  ///< (Hx, Hy, Hz), A/m
};

/// Angular eigenfrequency of the (m, n, p) resonance,
/// omega = (pi/sqrt(mu eps)) sqrt((m/a)^2 + (n/b)^2 + (p/d)^2).
/// Indices must be nonnegative with at most one zero.
double rect_mode_frequency(int m, int n, int p, const RectangularCavity& cav);

/// TE_{m0p} standing-wave fields (n = 0 only), E0 = 1, at a point inside the
/// cavity (walls inclusive). Throws std::invalid_argument outside or for
/// indices off the TE_{m0p} family.
FieldVectors rect_mode_fields(int m, int n, int p, const RectangularCavity& cav,
                              double x, double y, double z);

/// First-order eigenfrequency shift when one wall moves inward by a uniform
/// displacement: the boundary integral of E0* x H0 over the displaced wall
/// divided by the cavity's stored-energy integral, with the perturbed fields
/// replaced by the unperturbed ones. Midpoint quadrature, refined until the
/// result moves by less than 0.1%. Displacement must lie in [0, edge/10]
/// where edge is the cavity dimension normal to the wall.
double eigenfrequency_shift(const RectangularCavity& cav, int m, int n, int p,
                            Wall wall, double inward_displacement);

/// Binary state of every unit on the reflecting panel.
class Codebook {
  public:
    /// All-zero codebook. Unit count must be positive and divisible by 4 so
    /// the hex form is exact.
    explicit Codebook(std::size_t units);

    /// Parses units/4 hex digits, most significant unit first.
    static Codebook from_hex(const std::string& hex, std::size_t units);
    std::string to_hex() const;

    std::size_t units() const { return bits_.size(); }
    bool bit(std::size_t i) const { return bits_.at(i) != 0; }
    void set_bit(std::size_t i, bool v) { bits_.at(i) = v ? 1 : 0; }

    /// Number of units whose state differs; lengths must match.
    std::size_t hamming_distance(const Codebook& other) const;

    bool operator==(const Codebook& other) const { return bits_ == other.bits_; }

  private:
    std::vector<std::uint8_t> bits_;
};

/// Reconfigurable reflecting panel bonded to one cavity wall.
struct RisPanel {
    std::size_t unit_count = 512;
    double unit_area = 0.01;   ///< m^2 per unit
    double delta_phi = kPi;    ///< reflection phase step between states (rad)
    double lambda = 0.0;       ///< operating wavelength (m)
    double kappa = 0.0;        ///< frequency-jitter scale (rad/s per sqrt(unit))

    void validate() const;
};

/// Boundary displacement equivalent to a reflection phase step:
/// (delta_phi / 2 pi) * lambda.
double equivalent_displacement(double delta_phi, double lambda);

/// Volume swept by a codebook switch:
/// Hamming(a, b) * unit_area * equivalent_displacement.
double codebook_switch_volume(const Codebook& cb_a, const Codebook& cb_b,
                              const RisPanel& panel);

/// Statistical image of a codebook switch on the modal ensemble. Each
/// eigenfrequency receives an independent zero-mean Gaussian shift with
/// std = kappa * sqrt(hamming), each phase moves along the shortest arc
/// toward a fresh uniform draw with weight hamming/U (so a full switch
/// redraws every phase), gains stay fixed, and the result is re-sorted and
/// clamped back into the band. Identical codebooks return the input
/// unchanged.
EigenmodeEnsemble perturb_ensemble(const EigenmodeEnsemble& ens,
                                   const Codebook& cb_a, const Codebook& cb_b,
                                   const RisPanel& panel, std::uint64_t seed);

}  // namespace cavitymod

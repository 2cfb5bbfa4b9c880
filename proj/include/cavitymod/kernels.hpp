#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "cavitymod/eigenmode.hpp"

// Hot loops, each in a serial reference version and an OpenMP version.
// Both orders of accumulation are identical (parallel workers fill
// independent slots that are then reduced serially), so the pair of
// implementations produces bit-identical results and the serial one can
// stand as the oracle in tests.

namespace cavitymod::kernels {

using cplx = std::complex<double>;

/// out[i] = a0 * sum_n alpha_n e^{j phi_n} / (j(omega_n - w_i) + 1/(2 tau_n)).
void transfer_function_serial(std::span<const Mode> modes, double a0,
                              std::span<const double> omega_grid,
                              std::span<cplx> out);
void transfer_function_parallel(std::span<const Mode> modes, double a0,
                                std::span<const double> omega_grid,
                                std::span<cplx> out);

/// Dynamic time warping distance between two real sequences with
/// absolute-difference local cost and steps (i-1,j), (i,j-1), (i-1,j-1).
/// window == 0 means unconstrained; window > 0 restricts the path to the
/// Sakoe-Chiba band |i - j| <= window and requires the band to admit a path
/// (|len(a) - len(b)| <= window), else std::invalid_argument.
double dtw_distance(std::span<const double> a, std::span<const double> b,
                    std::size_t window);

/// Batched DTW over pairs (seqs_a[i], seqs_b[i]).
std::vector<double> pairwise_dtw_serial(
    const std::vector<std::vector<double>>& seqs_a,
    const std::vector<std::vector<double>>& seqs_b, std::size_t window);
std::vector<double> pairwise_dtw_parallel(
    const std::vector<std::vector<double>>& seqs_a,
    const std::vector<std::vector<double>>& seqs_b, std::size_t window);

/// Midpoint tensor-product quadrature of f over [x0,x1] x [y0,y1] with
/// nx * ny cells. Row sums are accumulated in fixed index order.
double quadrature_2d_serial(const std::function<double(double, double)>& f,
                            double x0, double x1, double y0, double y1,
                            std::size_t nx, std::size_t ny);
double quadrature_2d_parallel(const std::function<double(double, double)>& f,
                              double x0, double x1, double y0, double y1,
                              std::size_t nx, std::size_t ny);
cplx quadrature_2d_serial_complex(const std::function<cplx(double, double)>& f,
                                  double x0, double x1, double y0, double y1,
                                  std::size_t nx, std::size_t ny);
cplx quadrature_2d_parallel_complex(
    const std::function<cplx(double, double)>& f, double x0, double x1,
    double y0, double y1, std::size_t nx, std::size_t ny);

/// Midpoint tensor-product quadrature over a box with nx * ny * nz cells.
double quadrature_3d_serial(
    const std::function<double(double, double, double)>& f, double x0,
    double x1, double y0, double y1, double z0, double z1, std::size_t nx,
    std::size_t ny, std::size_t nz);
double quadrature_3d_parallel(
    const std::function<double(double, double, double)>& f, double x0,
    double x1, double y0, double y1, double z0, double z1, std::size_t nx,
    std::size_t ny, std::size_t nz);

}  // namespace cavitymod::kernels

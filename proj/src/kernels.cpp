#include "cavitymod/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace cavitymod::kernels {

namespace {

inline cplx bin_response(std::span<const Mode> modes, double a0, double w) {
    // amp / (1/(2 tau) + j (omega_n - w)) spelled out; the denominator's
    // magnitude is at least 1/(2 tau) so the plain quotient is safe, and it
    // avoids the range-checked libcall in the innermost loop
    double re = 0.0, im = 0.0;
    for (const Mode& m : modes) {
        const double da = 1.0 / (2.0 * m.tau);
        const double db = m.omega - w;
        const double inv = 1.0 / (da * da + db * db);
        const double ar = m.alpha * std::cos(m.phi);
        const double ai = m.alpha * std::sin(m.phi);
        re += (ar * da + ai * db) * inv;
        im += (ai * da - ar * db) * inv;
    }
    return cplx(a0 * re, a0 * im);
}

template <typename T>
T row_sum_2d(const std::function<T(double, double)>& f, double x0, double hx,
             std::size_t nx, double y) {
    T acc{};
    for (std::size_t ix = 0; ix < nx; ++ix) {
        acc += f(x0 + (static_cast<double>(ix) + 0.5) * hx, y);
    }
    return acc;
}

template <typename T>
T plane_sum_3d(const std::function<T(double, double, double)>& f, double x0,
               double hx, std::size_t nx, double y0, double hy, std::size_t ny,
               double z) {
    T acc{};
    for (std::size_t iy = 0; iy < ny; ++iy) {
        const double y = y0 + (static_cast<double>(iy) + 0.5) * hy;
        for (std::size_t ix = 0; ix < nx; ++ix) {
            acc += f(x0 + (static_cast<double>(ix) + 0.5) * hx, y, z);
        }
    }
    return acc;
}

void check_cells(std::size_t n, const char* which) {
    if (n == 0) {
        throw std::invalid_argument(std::string("quadrature: ") + which +
                                    " cell count must be positive");
    }
}

template <typename T>
T quad2d_impl(const std::function<T(double, double)>& f, double x0, double x1,
              double y0, double y1, std::size_t nx, std::size_t ny,
              bool parallel) {
    check_cells(nx, "x");
    check_cells(ny, "y");
    const double hx = (x1 - x0) / static_cast<double>(nx);
    const double hy = (y1 - y0) / static_cast<double>(ny);
    std::vector<T> rows(ny, T{});
    if (parallel) {
#pragma omp parallel for schedule(static)
        for (std::ptrdiff_t iy = 0; iy < static_cast<std::ptrdiff_t>(ny); ++iy) {
            const double y = y0 + (static_cast<double>(iy) + 0.5) * hy;
            rows[static_cast<std::size_t>(iy)] = row_sum_2d(f, x0, hx, nx, y);
        }
    } else {
        for (std::size_t iy = 0; iy < ny; ++iy) {
            const double y = y0 + (static_cast<double>(iy) + 0.5) * hy;
            rows[iy] = row_sum_2d(f, x0, hx, nx, y);
        }
    }
    T total{};
    for (const T& r : rows) total += r;
    return total * (hx * hy);
}

template <typename T>
T quad3d_impl(const std::function<T(double, double, double)>& f, double x0,
              double x1, double y0, double y1, double z0, double z1,
              std::size_t nx, std::size_t ny, std::size_t nz, bool parallel) {
    check_cells(nx, "x");
    check_cells(ny, "y");
    check_cells(nz, "z");
    const double hx = (x1 - x0) / static_cast<double>(nx);
    const double hy = (y1 - y0) / static_cast<double>(ny);
    const double hz = (z1 - z0) / static_cast<double>(nz);
    std::vector<T> planes(nz, T{});
    if (parallel) {
#pragma omp parallel for schedule(static)
        for (std::ptrdiff_t iz = 0; iz < static_cast<std::ptrdiff_t>(nz); ++iz) {
            const double z = z0 + (static_cast<double>(iz) + 0.5) * hz;
            planes[static_cast<std::size_t>(iz)] =
                plane_sum_3d(f, x0, hx, nx, y0, hy, ny, z);
        }
    } else {
        for (std::size_t iz = 0; iz < nz; ++iz) {
            const double z = z0 + (static_cast<double>(iz) + 0.5) * hz;
            planes[iz] = plane_sum_3d(f, x0, hx, nx, y0, hy, ny, z);
        }
    }
    T total{};
    for (const T& p : planes) total += p;
    return total * (hx * hy * hz);
}

}  // namespace

void transfer_function_serial(std::span<const Mode> modes, double a0,
                              std::span<const double> omega_grid,
                              std::span<cplx> out) {
    if (out.size() != omega_grid.size()) {
        throw std::invalid_argument("transfer_function: output size mismatch");
    }
    for (std::size_t i = 0; i < omega_grid.size(); ++i) {
        out[i] = bin_response(modes, a0, omega_grid[i]);
    }
}

void transfer_function_parallel(std::span<const Mode> modes, double a0,
                                std::span<const double> omega_grid,
                                std::span<cplx> out) {
    if (out.size() != omega_grid.size()) {
        throw std::invalid_argument("transfer_function: output size mismatch");
    }
    const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(omega_grid.size());
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        out[static_cast<std::size_t>(i)] =
            bin_response(modes, a0, omega_grid[static_cast<std::size_t>(i)]);
    }
}

double dtw_distance(std::span<const double> a, std::span<const double> b,
                    std::size_t window) {
    const std::size_t n = a.size();
    const std::size_t m = b.size();
    if (n == 0 || m == 0) {
        throw std::invalid_argument("dtw_distance: empty sequence");
    }
    const std::size_t len_diff = n > m ? n - m : m - n;
    if (window > 0 && len_diff > window) {
        throw std::invalid_argument(
            "dtw_distance: window narrower than the length difference");
    }
    constexpr double inf = std::numeric_limits<double>::infinity();
    // dp rows are indexed by j+1 over b; dp[0] column handled via prev[0].
    std::vector<double> prev(m + 1, inf);
    std::vector<double> curr(m + 1, inf);
    prev[0] = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        std::fill(curr.begin(), curr.end(), inf);
        std::size_t jlo = 0;
        std::size_t jhi = m;
        if (window > 0) {
            jlo = i > window ? i - window : 0;
            jhi = std::min(m, i + window + 1);
        }
        for (std::size_t j = jlo; j < jhi; ++j) {
            const double cost = std::abs(a[i] - b[j]);
            const double best =
                std::min({prev[j + 1], curr[j], prev[j]});
            curr[j + 1] = cost + best;
        }
        std::swap(prev, curr);
    }
    return prev[m];
}

std::vector<double> pairwise_dtw_serial(
    const std::vector<std::vector<double>>& seqs_a,
    const std::vector<std::vector<double>>& seqs_b, std::size_t window) {
    if (seqs_a.size() != seqs_b.size()) {
        throw std::invalid_argument("pairwise_dtw: pair count mismatch");
    }
    std::vector<double> out(seqs_a.size(), 0.0);
    for (std::size_t i = 0; i < seqs_a.size(); ++i) {
        out[i] = dtw_distance(seqs_a[i], seqs_b[i], window);
    }
    return out;
}

std::vector<double> pairwise_dtw_parallel(
    const std::vector<std::vector<double>>& seqs_a,
    const std::vector<std::vector<double>>& seqs_b, std::size_t window) {
    if (seqs_a.size() != seqs_b.size()) {
        throw std::invalid_argument("pairwise_dtw: pair count mismatch");
    }
    std::vector<double> out(seqs_a.size(), 0.0);
    const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(seqs_a.size());
#pragma omp parallel for schedule(dynamic)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        const std::size_t k = static_cast<std::size_t>(i);
        out[k] = dtw_distance(seqs_a[k], seqs_b[k], window);
    }
    return out;
}

double quadrature_2d_serial(const std::function<double(double, double)>& f,
                            double x0, double x1, double y0, double y1,
                            std::size_t nx, std::size_t ny) {
    return quad2d_impl<double>(f, x0, x1, y0, y1, nx, ny, false);
}

double quadrature_2d_parallel(const std::function<double(double, double)>& f,
                              double x0, double x1, double y0, double y1,
                              std::size_t nx, std::size_t ny) {
    return quad2d_impl<double>(f, x0, x1, y0, y1, nx, ny, true);
}

cplx quadrature_2d_serial_complex(const std::function<cplx(double, double)>& f,
                                  double x0, double x1, double y0, double y1,
                                  std::size_t nx, std::size_t ny) {
    return quad2d_impl<cplx>(f, x0, x1, y0, y1, nx, ny, false);
}

cplx quadrature_2d_parallel_complex(
    const std::function<cplx(double, double)>& f, double x0, double x1,
    double y0, double y1, std::size_t nx, std::size_t ny) {
    return quad2d_impl<cplx>(f, x0, x1, y0, y1, nx, ny, true);
}

double quadrature_3d_serial(
    const std::function<double(double, double, double)>& f, double x0,
    double x1, double y0, double y1, double z0, double z1, std::size_t nx,
    std::size_t ny, std::size_t nz) {
    return quad3d_impl<double>(f, x0, x1, y0, y1, z0, z1, nx, ny, nz, false);
}

double quadrature_3d_parallel(
    const std::function<double(double, double, double)>& f, double x0,
    double x1, double y0, double y1, double z0, double z1, std::size_t nx,
    std::size_t ny, std::size_t nz) {
    return quad3d_impl<double>(f, x0, x1, y0, y1, z0, z1, nx, ny, nz, true);
}

}  // namespace cavitymod::kernels

#include <algorithm>
#include <cmath>
#include <cstring>
#include <limits>
#include <numbers>
#include <random>
#include <stdexcept>
#include <vector>

#include "cavitymod/kernels.hpp"
#include "doctest.h"

namespace k = cavitymod::kernels;
using cavitymod::Mode;
using cavitymod::kernels::cplx;

namespace {

// Exhaustive warping-path search. Recursion from (i, j) back to (0, 0) over
// the same step set as the DP; exponential, so only for tiny inputs.
double brute_dtw(const std::vector<double>& a, const std::vector<double>& b,
                 std::size_t i, std::size_t j) {
    const double cost = std::abs(a[i] - b[j]);
    if (i == 0 && j == 0) return cost;
    double best = std::numeric_limits<double>::infinity();
    if (i > 0) best = std::min(best, brute_dtw(a, b, i - 1, j));
    if (j > 0) best = std::min(best, brute_dtw(a, b, i, j - 1));
    if (i > 0 && j > 0) best = std::min(best, brute_dtw(a, b, i - 1, j - 1));
    return cost + best;
}

std::vector<double> random_seq(std::mt19937_64& rng, std::size_t len) {
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    std::vector<double> s(len);
    for (auto& v : s) v = u(rng);
    return s;
}

}  // namespace

TEST_CASE("dtw worked example") {
    const std::vector<double> a = {1, 2, 3};
    const std::vector<double> b = {1, 3};
    CHECK(k::dtw_distance(a, b, 0) == doctest::Approx(1.0));
}

TEST_CASE("dtw of identical sequences is zero") {
    const std::vector<double> a = {0.5, -1.25, 3.0, 3.0, 7.5};
    CHECK(k::dtw_distance(a, a, 0) == 0.0);
    CHECK(k::dtw_distance(a, a, 1) == 0.0);
}

TEST_CASE("dtw is symmetric") {
    std::mt19937_64 rng(42);
    for (int trial = 0; trial < 50; ++trial) {
        auto a = random_seq(rng, 9);
        auto b = random_seq(rng, 7);
        CHECK(k::dtw_distance(a, b, 0) ==
              doctest::Approx(k::dtw_distance(b, a, 0)).epsilon(1e-12));
    }
}

TEST_CASE("dtw matches exhaustive path search") {
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<std::size_t> len(1, 6);
    for (int trial = 0; trial < 300; ++trial) {
        auto a = random_seq(rng, len(rng));
        auto b = random_seq(rng, len(rng));
        const double expect = brute_dtw(a, b, a.size() - 1, b.size() - 1);
        CHECK(k::dtw_distance(a, b, 0) == doctest::Approx(expect).epsilon(1e-12));
    }
}

TEST_CASE("a wide band reproduces the unconstrained distance") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 30; ++trial) {
        auto a = random_seq(rng, 10);
        auto b = random_seq(rng, 8);
        const double free = k::dtw_distance(a, b, 0);
        const double banded = k::dtw_distance(a, b, 10);
        CHECK(banded == doctest::Approx(free).epsilon(1e-12));
    }
}

TEST_CASE("narrowing the band never lowers the distance") {
    std::mt19937_64 rng(13);
    for (int trial = 0; trial < 30; ++trial) {
        auto a = random_seq(rng, 12);
        auto b = random_seq(rng, 12);
        double prev = k::dtw_distance(a, b, 0);
        for (std::size_t w = 11; w >= 1; --w) {
            const double d = k::dtw_distance(a, b, w);
            CHECK(d >= prev - 1e-12);
            prev = d;
        }
    }
}

TEST_CASE("dtw rejects impossible bands and empty input") {
    const std::vector<double> a = {1, 2, 3, 4, 5};
    const std::vector<double> b = {1, 2};
    CHECK_THROWS_AS(k::dtw_distance(a, b, 2), std::invalid_argument);
    CHECK_NOTHROW(k::dtw_distance(a, b, 3));
    const std::vector<double> empty;
    CHECK_THROWS_AS(k::dtw_distance(a, empty, 0), std::invalid_argument);
    CHECK_THROWS_AS(k::dtw_distance(empty, empty, 0), std::invalid_argument);
}

TEST_CASE("pairwise dtw parallel matches serial bit for bit") {
    std::mt19937_64 rng(21);
    std::uniform_int_distribution<std::size_t> len(3, 40);
    std::vector<std::vector<double>> xs, ys;
    for (int i = 0; i < 64; ++i) {
        xs.push_back(random_seq(rng, len(rng)));
        ys.push_back(random_seq(rng, xs.back().size()));
    }
    const auto serial = k::pairwise_dtw_serial(xs, ys, 4);
    const auto parallel = k::pairwise_dtw_parallel(xs, ys, 4);
    REQUIRE(serial.size() == parallel.size());
    CHECK(std::memcmp(serial.data(), parallel.data(),
                      serial.size() * sizeof(double)) == 0);
}

TEST_CASE("pairwise dtw rejects mismatched batches") {
    std::vector<std::vector<double>> xs(3, std::vector<double>{1, 2});
    std::vector<std::vector<double>> ys(2, std::vector<double>{1, 2});
    CHECK_THROWS_AS(k::pairwise_dtw_serial(xs, ys, 0), std::invalid_argument);
    CHECK_THROWS_AS(k::pairwise_dtw_parallel(xs, ys, 0), std::invalid_argument);
}

TEST_CASE("midpoint quadrature is exact for bilinear integrands") {
    const auto f = [](double x, double y) { return x * y; };
    CHECK(k::quadrature_2d_serial(f, 0, 1, 0, 1, 11, 7) ==
          doctest::Approx(0.25).epsilon(1e-12));
}

TEST_CASE("2d quadrature converges on a smooth integrand") {
    const auto f = [](double x, double y) { return std::sin(x) * std::sin(y); };
    const double pi = std::numbers::pi;
    CHECK(k::quadrature_2d_serial(f, 0, pi, 0, pi, 256, 256) ==
          doctest::Approx(4.0).epsilon(1e-4));
}

TEST_CASE("3d quadrature ties out on separable integrands") {
    const auto f = [](double x, double y, double z) { return x * y * z; };
    CHECK(k::quadrature_3d_serial(f, 0, 1, 0, 1, 0, 1, 5, 6, 7) ==
          doctest::Approx(0.125).epsilon(1e-12));
    const double pi = std::numbers::pi;
    const auto g = [](double x, double y, double z) {
        return std::sin(x) * std::sin(y) * std::sin(z);
    };
    CHECK(k::quadrature_3d_serial(g, 0, pi, 0, pi, 0, pi, 96, 96, 96) ==
          doctest::Approx(8.0).epsilon(1e-3));
}

TEST_CASE("complex quadrature matches the analytic product") {
    const double pi = std::numbers::pi;
    const auto f = [](double x, double y) {
        return std::exp(cplx(0.0, x + y));
    };
    const cplx got = k::quadrature_2d_serial_complex(f, 0, pi, 0, pi, 200, 200);
    CHECK(got.real() == doctest::Approx(-4.0).epsilon(1e-4));
    CHECK(std::abs(got.imag()) < 1e-10);
}

TEST_CASE("parallel quadrature matches serial bit for bit") {
    const auto f = [](double x, double y) {
        return std::exp(-x * x) * std::cos(3.0 * y);
    };
    const double s = k::quadrature_2d_serial(f, -1, 2, 0, 1.5, 64, 48);
    const double p = k::quadrature_2d_parallel(f, -1, 2, 0, 1.5, 64, 48);
    CHECK(std::memcmp(&s, &p, sizeof(double)) == 0);

    const auto g = [](double x, double y, double z) {
        return std::cos(x * y) + z * z;
    };
    const double s3 = k::quadrature_3d_serial(g, 0, 1, 0, 2, -1, 1, 24, 20, 16);
    const double p3 = k::quadrature_3d_parallel(g, 0, 1, 0, 2, -1, 1, 24, 20, 16);
    CHECK(std::memcmp(&s3, &p3, sizeof(double)) == 0);

    const auto h = [](double x, double y) { return std::exp(cplx(y, x)); };
    const cplx sc = k::quadrature_2d_serial_complex(h, 0, 1, 0, 1, 40, 40);
    const cplx pc = k::quadrature_2d_parallel_complex(h, 0, 1, 0, 1, 40, 40);
    CHECK(std::memcmp(&sc, &pc, sizeof(cplx)) == 0);
}

TEST_CASE("quadrature rejects empty grids") {
    const auto f = [](double, double) { return 1.0; };
    CHECK_THROWS_AS(k::quadrature_2d_serial(f, 0, 1, 0, 1, 0, 4),
                    std::invalid_argument);
}

TEST_CASE("single mode response peaks on resonance with the right width") {
    Mode m;
    m.omega = 5.0e6;
    m.alpha = 1.0;
    m.phi = 0.0;
    m.tau = 2.0e-6;
    const std::vector<double> grid = {m.omega, m.omega + 1.0 / (2.0 * m.tau),
                                      m.omega - 1.0 / (2.0 * m.tau)};
    std::vector<cplx> h(grid.size());
    k::transfer_function_serial(std::span<const Mode>(&m, 1), 1.0, grid, h);
    const double peak_power = std::norm(h[0]);
    CHECK(std::abs(h[0]) == doctest::Approx(2.0 * m.tau).epsilon(1e-12));
    CHECK(std::norm(h[1]) == doctest::Approx(0.5 * peak_power).epsilon(1e-12));
    CHECK(std::norm(h[2]) == doctest::Approx(0.5 * peak_power).epsilon(1e-12));
}

TEST_CASE("transfer function scales with the delay profile gain") {
    Mode m;
    m.omega = 1.0e7;
    m.alpha = 0.7;
    m.phi = 1.1;
    m.tau = 1.0e-6;
    const std::vector<double> grid = {9.99e6, 1.0e7, 1.001e7};
    std::vector<cplx> h1(grid.size()), h3(grid.size());
    k::transfer_function_serial(std::span<const Mode>(&m, 1), 1.0, grid, h1);
    k::transfer_function_serial(std::span<const Mode>(&m, 1), 3.0, grid, h3);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        CHECK(std::abs(h3[i] - 3.0 * h1[i]) < 1e-12 * std::abs(h3[i]) + 1e-30);
    }
}

TEST_CASE("parallel transfer function matches serial bit for bit") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<Mode> modes(40);
    for (auto& m : modes) {
        m.omega = 1.0e9 + 1.0e6 * u(rng);
        m.alpha = 2.0 * u(rng) - 1.0;
        m.phi = 2.0 * std::numbers::pi * u(rng);
        m.tau = 1.0e-6;
    }
    std::vector<double> grid(512);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        grid[i] = 1.0e9 + 2.0e3 * static_cast<double>(i);
    }
    std::vector<cplx> s(grid.size()), p(grid.size());
    k::transfer_function_serial(modes, 1.0, grid, s);
    k::transfer_function_parallel(modes, 1.0, grid, p);
    CHECK(std::memcmp(s.data(), p.data(), s.size() * sizeof(cplx)) == 0);
}

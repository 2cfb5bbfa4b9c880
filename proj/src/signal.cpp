#include "cavitymod/signal.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace cavitymod::signal {

bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

void fft(std::vector<cplx>& data) {
    const std::size_t n = data.size();
    if (!is_power_of_two(n))
        throw std::invalid_argument("fft: size must be a power of two");
    if (n == 1) return;

    // bit-reversal permutation
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(data[i], data[j]);
    }

    for (std::size_t len = 2; len <= n; len <<= 1) {
        const double ang = -2.0 * std::numbers::pi / static_cast<double>(len);
        const cplx wlen(std::cos(ang), std::sin(ang));
        for (std::size_t i = 0; i < n; i += len) {
            cplx w(1.0, 0.0);
            for (std::size_t k = 0; k < len / 2; ++k) {
                const cplx u = data[i + k];
                const cplx v = data[i + k + len / 2] * w;
                data[i + k] = u + v;
                data[i + k + len / 2] = u - v;
                w *= wlen;
            }
        }
    }
}

void ifft(std::vector<cplx>& data) {
    for (auto& x : data) x = std::conj(x);
    fft(data);
    const double inv = 1.0 / static_cast<double>(data.size());
    for (auto& x : data) x = std::conj(x) * inv;
}

std::vector<cplx> fftshift(const std::vector<cplx>& data) {
    const std::size_t n = data.size();
    std::vector<cplx> out(n);
    const std::size_t h = n / 2;
    for (std::size_t i = 0; i < n; ++i) out[i] = data[(i + h) % n];
    return out;
}

std::vector<cplx> ifftshift(const std::vector<cplx>& data) {
    const std::size_t n = data.size();
    std::vector<cplx> out(n);
    const std::size_t h = (n + 1) / 2;
    for (std::size_t i = 0; i < n; ++i) out[i] = data[(i + h) % n];
    return out;
}

}  // namespace cavitymod::signal

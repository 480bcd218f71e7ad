#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <span>
#include <vector>

namespace voicekit {

// |sum_n x[n] e^{-j 2 pi f n / rate}| via the Goertzel recurrence. Works for
// any frequency, not just DFT bin centres.
inline double goertzel_magnitude(std::span<const double> x, double frequency_hz, double sample_rate_hz)
{
    const double omega = 2.0 * std::numbers::pi * frequency_hz / sample_rate_hz;
    const double coeff = 2.0 * std::cos(omega);
    double s1 = 0.0;
    double s2 = 0.0;
    for (double v : x) {
        const double s0 = v + coeff * s1 - s2;
        s2 = s1;
        s1 = s0;
    }
    const double power = s1 * s1 + s2 * s2 - coeff * s1 * s2;
    return std::sqrt(std::max(power, 0.0));
}

// Raised-cosine (Hann) window. The periodic form divides by n instead of n-1,
// which is what a frame-by-frame DFT wants.
inline std::vector<double> hann_window(std::size_t n, bool periodic = false)
{
    std::vector<double> w(n, 1.0);
    if (n < 2) {
        return w;
    }
    const double denom = static_cast<double>(periodic ? n : n - 1);
    for (std::size_t i = 0; i < n; ++i) {
        w[i] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * static_cast<double>(i) / denom);
    }
    return w;
}

} // namespace voicekit

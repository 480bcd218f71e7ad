#pragma once

#include <cmath>
#include <string>
#include <variant>

#include "voicekit/error.hpp"

namespace voicekit {

// f_min * (f_max/f_min)^(i/(rows-1)): the classic vOICe pitch ladder.
struct ExponentialMap {
    double f_min = 500.0;
    double f_max = 5000.0;

    friend bool operator==(const ExponentialMap&, const ExponentialMap&) = default;
};

// (s/2) tanh(alpha (i - rows/2)) + s/2: concentrates the central rows of the
// image in the middle of the frequency range.
struct RectifiedTanhMap {
    double range_hz = 7000.0;
    double alpha = 0.035;

    friend bool operator==(const RectifiedTanhMap&, const RectifiedTanhMap&) = default;
};

using PositionFrequencyMap = std::variant<ExponentialMap, RectifiedTanhMap>;

inline void validate(const PositionFrequencyMap& pf)
{
    if (const auto* e = std::get_if<ExponentialMap>(&pf)) {
        require(e->f_min > 0.0 && e->f_max > e->f_min && std::isfinite(e->f_max),
                "exponential map needs 0 < f_min < f_max");
    } else {
        const auto& t = std::get<RectifiedTanhMap>(pf);
        require(t.range_hz > 0.0 && std::isfinite(t.range_hz), "tanh map needs s > 0");
        require(t.alpha > 0.0 && std::isfinite(t.alpha), "tanh map needs alpha > 0");
    }
}

// Frequency of the oscillator for height index `height` (0 = bottom row,
// rows-1 = top row). Strictly increasing in `height`.
inline double pf_frequency(const PositionFrequencyMap& pf, int height, int rows)
{
    require(rows >= 2, "pf_frequency: rows must be >= 2");
    require(height >= 0 && height <= rows - 1,
            "pf_frequency: height index " + std::to_string(height) + " outside [0, " + std::to_string(rows - 1) + "]");
    validate(pf);
    if (const auto* e = std::get_if<ExponentialMap>(&pf)) {
        return e->f_min * std::pow(e->f_max / e->f_min, static_cast<double>(height) / (rows - 1));
    }
    // (s/2) tanh(x) + s/2 == s / (1 + e^{-2x}); this form keeps full relative
    // precision in the saturated tails, where the tanh form rounds to 0.
    const auto& t = std::get<RectifiedTanhMap>(pf);
    const double x = t.alpha * (height - rows / 2.0);
    if (x <= 0.0) {
        return t.range_hz / (1.0 + std::exp(-2.0 * x));
    }
    return t.range_hz - t.range_hz / (1.0 + std::exp(2.0 * x));
}

// Real-valued height position whose frequency is f. Accepts f in the closed
// attainable interval [pf_frequency(0), pf_frequency(rows-1)].
inline double pf_inverse(const PositionFrequencyMap& pf, double f, int rows)
{
    require(rows >= 2, "pf_inverse: rows must be >= 2");
    const double lo = pf_frequency(pf, 0, rows);
    const double hi = pf_frequency(pf, rows - 1, rows);
    require(std::isfinite(f) && f >= lo && f <= hi,
            "pf_inverse: frequency " + std::to_string(f) + " Hz outside attainable range");
    if (const auto* e = std::get_if<ExponentialMap>(&pf)) {
        return (rows - 1) * std::log(f / e->f_min) / std::log(e->f_max / e->f_min);
    }
    // atanh((f - s/2) / (s/2)) == log(f / (s - f)) / 2
    const auto& t = std::get<RectifiedTanhMap>(pf);
    return rows / 2.0 + std::log(f / (t.range_hz - f)) / (2.0 * t.alpha);
}

} // namespace voicekit

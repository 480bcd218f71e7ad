#pragma once

#include <cmath>
#include <numbers>
#include <vector>

#include "voicekit/codec/audio_clip.hpp"
#include "voicekit/codec/gray_image.hpp"
#include "voicekit/codec/scheme.hpp"

namespace voicekit {

// First sample of column c when n samples are split over cols columns.
inline std::size_t column_start(std::size_t c, std::size_t n, std::size_t cols) { return c * n / cols; }

namespace detail {

// Per-sample description of the column envelope: amplitude at sample n is
//   a[col] + (a[other] - a[col]) * weight
// where other is the neighbouring column whose boundary ramp n lies in.
struct ColumnEnvelope {
    std::vector<int> col;
    std::vector<int> other;
    std::vector<double> weight;

    ColumnEnvelope(std::size_t n, int cols, double crossfade_fraction)
        : col(n), other(n), weight(n, 0.0)
    {
        const auto ncols = static_cast<std::size_t>(cols);
        const double half = 0.5 * crossfade_fraction * static_cast<double>(n) / static_cast<double>(cols);
        for (std::size_t c = 0; c < ncols; ++c) {
            const std::size_t begin = column_start(c, n, ncols);
            const std::size_t end = column_start(c + 1, n, ncols);
            for (std::size_t s = begin; s < end; ++s) {
                col[s] = static_cast<int>(c);
                other[s] = static_cast<int>(c);
                if (half <= 0.0) {
                    continue;
                }
                const double pos = static_cast<double>(s);
                // The ramp across boundary b runs linearly from the left column's
                // amplitude at b - half to the right column's at b + half.
                if (c > 0 && pos - static_cast<double>(begin) < half) {
                    other[s] = static_cast<int>(c) - 1;
                    weight[s] = 1.0 - (pos - static_cast<double>(begin) + half) / (2.0 * half);
                } else if (c + 1 < ncols && static_cast<double>(end) - pos <= half) {
                    other[s] = static_cast<int>(c) + 1;
                    weight[s] = (pos - static_cast<double>(end) + half) / (2.0 * half);
                }
            }
        }
    }
};

} // namespace detail

inline void check_encodable(const EncodingScheme& scheme, int cols)
{
    validate(scheme);
    if (scheme.duration_s * scheme.sample_rate_hz < cols) {
        throw InvalidArgument("encode: " + std::to_string(scheme.sample_count()) + " samples cannot carry " +
                              std::to_string(cols) + " columns");
    }
}

// Left-to-right scan: display row r drives a sine at pf_frequency(rows-1-r),
// loudness follows brightness linearly, scaled by 1/rows so the sum never clips.
inline AudioClip encode(const GrayImage& image, const EncodingScheme& scheme)
{
    check_encodable(scheme, image.cols());
    const int rows = image.rows();
    const int cols = image.cols();
    const std::size_t n = scheme.sample_count();
    const double rate = scheme.sample_rate_hz;

    AudioClip clip;
    clip.sample_rate_hz = scheme.sample_rate_hz;
    clip.samples.assign(n, 0.0);

    const detail::ColumnEnvelope env(n, cols, scheme.crossfade_fraction);
    const double gain = 1.0 / (255.0 * rows);
    std::vector<double> amp(static_cast<std::size_t>(cols));

    // Rows are accumulated in a fixed order; skipped terms would add exactly +-0.
    for (int r = 0; r < rows; ++r) {
        bool silent = true;
        for (int c = 0; c < cols; ++c) {
            amp[static_cast<std::size_t>(c)] = image.at(r, c) * gain;
            silent = silent && image.at(r, c) == 0;
        }
        if (silent) {
            continue;
        }
        const double f = pf_frequency(scheme.pf, rows - 1 - r, rows);
        for (std::size_t s = 0; s < n; ++s) {
            const double a0 = amp[static_cast<std::size_t>(env.col[s])];
            const double a1 = amp[static_cast<std::size_t>(env.other[s])];
            const double a = a0 + (a1 - a0) * env.weight[s];
            if (a == 0.0) {
                continue;
            }
            const double cycles = f * static_cast<double>(s) / rate;
            const double phase = 2.0 * std::numbers::pi * (cycles - std::floor(cycles));
            clip.samples[s] += a * std::sin(phase);
        }
    }
    return clip;
}

} // namespace voicekit

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <vector>

#include "voicekit/codec/audio_clip.hpp"
#include "voicekit/codec/encoder.hpp"
#include "voicekit/codec/goertzel.hpp"
#include "voicekit/codec/gray_image.hpp"
#include "voicekit/codec/scheme.hpp"

namespace voicekit {

// The scheme cannot separate adjacent rows at this image geometry.
struct Undecodable : InvalidArgument {
    using InvalidArgument::InvalidArgument;
};

// Smallest spacing between adjacent row frequencies.
inline double min_row_spacing_hz(const PositionFrequencyMap& pf, int rows)
{
    double best = std::numeric_limits<double>::infinity();
    double prev = pf_frequency(pf, 0, rows);
    for (int i = 1; i < rows; ++i) {
        const double f = pf_frequency(pf, i, rows);
        best = std::min(best, f - prev);
        prev = f;
    }
    return best;
}

// Resolution of a column-long analysis slice, 1 / slice duration.
inline double column_resolution_hz(const EncodingScheme& scheme, std::size_t n_samples, int cols)
{
    const std::size_t shortest = n_samples / static_cast<std::size_t>(cols);
    return static_cast<double>(scheme.sample_rate_hz) / static_cast<double>(shortest);
}

inline bool is_decodable(const EncodingScheme& scheme, int rows, int cols)
{
    const std::size_t n = scheme.sample_count();
    if (n < static_cast<std::size_t>(cols)) {
        return false;
    }
    return min_row_spacing_hz(scheme.pf, rows) >= column_resolution_hz(scheme, n, cols);
}

// Matched-filter reconstruction: one Hann-windowed Goertzel per (column slice,
// row frequency), then the whole image is scaled so its peak is 255.
inline GrayImage decode(const AudioClip& clip, const EncodingScheme& scheme, int rows, int cols)
{
    validate(scheme);
    require(rows >= 2 && cols >= 1, "decode: need rows >= 2 and cols >= 1");
    require(clip.sample_rate_hz == scheme.sample_rate_hz, "decode: clip sample rate differs from scheme");
    const std::size_t expected = scheme.sample_count();
    const std::size_t n = clip.samples.size();
    const std::size_t tolerance = expected / static_cast<std::size_t>(cols);
    require(n + tolerance >= expected && n <= expected + tolerance,
            "decode: clip length " + std::to_string(n) + " inconsistent with scheme duration");
    require(n >= static_cast<std::size_t>(cols), "decode: fewer samples than columns");

    const double spacing = min_row_spacing_hz(scheme.pf, rows);
    const double resolution = column_resolution_hz(scheme, n, cols);
    if (spacing < resolution) {
        throw Undecodable("decode: adjacent rows are " + std::to_string(spacing) + " Hz apart but a column slice resolves only " +
                          std::to_string(resolution) + " Hz");
    }

    std::vector<double> freqs(static_cast<std::size_t>(rows));
    for (int r = 0; r < rows; ++r) {
        freqs[static_cast<std::size_t>(r)] = pf_frequency(scheme.pf, rows - 1 - r, rows);
    }

    std::vector<double> mags(static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols), 0.0);
    std::vector<double> slice;
    const auto ncols = static_cast<std::size_t>(cols);
    for (std::size_t c = 0; c < ncols; ++c) {
        const std::size_t begin = column_start(c, n, ncols);
        const std::size_t end = column_start(c + 1, n, ncols);
        const auto window = hann_window(end - begin);
        double window_sum = 0.0;
        slice.resize(end - begin);
        for (std::size_t i = 0; i < slice.size(); ++i) {
            slice[i] = clip.samples[begin + i] * window[i];
            window_sum += window[i];
        }
        for (int r = 0; r < rows; ++r) {
            mags[static_cast<std::size_t>(r) * ncols + c] =
                goertzel_magnitude(slice, freqs[static_cast<std::size_t>(r)], clip.sample_rate_hz) / window_sum;
        }
    }

    const double peak = *std::max_element(mags.begin(), mags.end());
    GrayImage out(rows, cols);
    if (peak <= 0.0) {
        return out;
    }
    for (int r = 0; r < rows; ++r) {
        for (int c = 0; c < cols; ++c) {
            const double v = 255.0 * mags[static_cast<std::size_t>(r) * ncols + static_cast<std::size_t>(c)] / peak;
            out.at(r, c) = static_cast<std::uint8_t>(std::clamp(std::lround(v), 0L, 255L));
        }
    }
    return out;
}

} // namespace voicekit

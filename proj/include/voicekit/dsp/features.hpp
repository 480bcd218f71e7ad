#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "voicekit/codec/audio_clip.hpp"
#include "voicekit/dsp/mel.hpp"
#include "voicekit/detail/kv.hpp"
#include "voicekit/dsp/stft.hpp"

namespace voicekit::dsp {

struct FeatureParams {
    std::size_t frame_len = 512;
    std::size_t hop = 160;
    std::size_t n_mels = 64;
    double f_low = 125.0;
    double f_high = 7500.0;
    std::size_t segments = 16;
};

struct FeatureVector {
    std::vector<double> values;
    std::string scheme;
    std::string stimulus_id;
};

inline constexpr double kLogFloor = 1e-10;

// log(mel energy + 1e-10) per frame, then frames are averaged into a fixed
// number of temporal segments and concatenated (segment-major), so clips of
// different durations give vectors of the same length.
inline FeatureVector log_mel_features(const AudioClip& clip, const MelFilterbank& fb, std::size_t frame_len,
                                      std::size_t hop, std::size_t segments = 16)
{
    require(segments >= 1, "log_mel_features: need at least one segment");
    require(fb.bins() == frame_len / 2 + 1, "log_mel_features: filterbank built for a different frame length");
    const Spectrogram spec = stft(clip, frame_len, hop);
    const std::size_t n_mels = fb.n_mels();

    std::vector<double> logmel(spec.frames * n_mels);
    for (std::size_t t = 0; t < spec.frames; ++t) {
        for (std::size_t j = 0; j < n_mels; ++j) {
            double energy = 0.0;
            for (std::size_t k = 0; k < spec.bins; ++k) {
                const double w = fb.weight(j, k);
                if (w != 0.0) {
                    const double m = spec.at(t, k);
                    energy += w * m * m;
                }
            }
            logmel[t * n_mels + j] = std::log(energy + kLogFloor);
        }
    }

    FeatureVector out;
    out.values.resize(segments * n_mels);
    for (std::size_t s = 0; s < segments; ++s) {
        const std::size_t begin = s * spec.frames / segments;
        const std::size_t end = std::max(begin + 1, (s + 1) * spec.frames / segments);
        const std::size_t first = std::min(begin, spec.frames - 1);
        const std::size_t last = std::min(end, spec.frames);
        for (std::size_t j = 0; j < n_mels; ++j) {
            // Mean as an offset from the first frame: exact when all frames agree.
            const double base = logmel[first * n_mels + j];
            double delta = 0.0;
            for (std::size_t t = first; t < last; ++t) {
                delta += logmel[t * n_mels + j] - base;
            }
            out.values[s * n_mels + j] = base + delta / static_cast<double>(last - first);
        }
    }
    return out;
}

inline FeatureVector log_mel_features(const AudioClip& clip, const FeatureParams& params = {})
{
    const MelFilterbank fb(params.n_mels, params.f_low, params.f_high, params.frame_len, clip.sample_rate_hz);
    return log_mel_features(clip, fb, params.frame_len, params.hop, params.segments);
}

// id,label,scheme,v0,v1,...
inline std::string features_csv_row(const FeatureVector& fv, const std::string& label)
{
    std::string row = fv.stimulus_id + "," + label + "," + fv.scheme;
    for (double v : fv.values) {
        row += "," + voicekit::detail::format_double(v);
    }
    return row + "\n";
}

} // namespace voicekit::dsp

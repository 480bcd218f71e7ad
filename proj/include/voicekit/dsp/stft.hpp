#pragma once

#include <complex>
#include <vector>

#include "voicekit/codec/audio_clip.hpp"
#include "voicekit/codec/goertzel.hpp"
#include "voicekit/dsp/fft.hpp"

namespace voicekit::dsp {

struct Spectrogram {
    std::size_t frames = 0;
    std::size_t bins = 0;
    std::vector<double> magnitudes; // frames x bins, row-major
    std::size_t frame_len_samples = 0;
    std::size_t hop_samples = 0;
    int sample_rate_hz = 0;

    double at(std::size_t frame, std::size_t bin) const { return magnitudes[frame * bins + bin]; }
};

// Frame t covers samples [t*hop, t*hop + frame_len); periodic Hann window;
// magnitudes of the first frame_len/2 + 1 DFT bins.
inline Spectrogram stft(const AudioClip& clip, std::size_t frame_len, std::size_t hop)
{
    require(is_power_of_two(frame_len), "stft: frame length must be a power of two");
    require(hop >= 1 && hop <= frame_len, "stft: hop must be in [1, frame_len]");
    if (clip.samples.size() < frame_len) {
        throw InvalidArgument("stft: clip of " + std::to_string(clip.samples.size()) +
                              " samples is shorter than one frame");
    }
    Spectrogram spec;
    spec.frame_len_samples = frame_len;
    spec.hop_samples = hop;
    spec.sample_rate_hz = clip.sample_rate_hz;
    spec.frames = 1 + (clip.samples.size() - frame_len) / hop;
    spec.bins = frame_len / 2 + 1;
    spec.magnitudes.resize(spec.frames * spec.bins);

    const auto window = hann_window(frame_len, true);
    std::vector<std::complex<double>> buf(frame_len);
    for (std::size_t t = 0; t < spec.frames; ++t) {
        const std::size_t offset = t * hop;
        for (std::size_t i = 0; i < frame_len; ++i) {
            buf[i] = clip.samples[offset + i] * window[i];
        }
        fft(buf);
        for (std::size_t k = 0; k < spec.bins; ++k) {
            spec.magnitudes[t * spec.bins + k] = std::abs(buf[k]);
        }
    }
    return spec;
}

} // namespace voicekit::dsp

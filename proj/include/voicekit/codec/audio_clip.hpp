#pragma once

#include <vector>

namespace voicekit {

// Mono signal, samples in [-1, 1].
struct AudioClip {
    std::vector<double> samples;
    int sample_rate_hz = 16000;

    double duration_s() const { return static_cast<double>(samples.size()) / sample_rate_hz; }

    friend bool operator==(const AudioClip&, const AudioClip&) = default;
};

} // namespace voicekit

#pragma once

#include <cmath>
#include <vector>

#include "voicekit/error.hpp"

namespace voicekit::dsp {

// HTK mel scale.
inline double hz_to_mel(double hz)
{
    require(hz >= 0.0, "hz_to_mel: negative frequency");
    return 2595.0 * std::log10(1.0 + hz / 700.0);
}

inline double mel_to_hz(double mel)
{
    require(mel >= 0.0, "mel_to_hz: negative mel value");
    return 700.0 * (std::pow(10.0, mel / 2595.0) - 1.0);
}

// Triangular filters equally spaced on the mel axis, evaluated at the DFT bin
// centres of a frame_len-point transform.
class MelFilterbank {
public:
    MelFilterbank(std::size_t n_mels, double f_low, double f_high, std::size_t frame_len, int sample_rate_hz)
        : n_mels_(n_mels), f_low_(f_low), f_high_(f_high), bins_(frame_len / 2 + 1)
    {
        require(n_mels >= 1, "mel filterbank: need at least one filter");
        require(f_low >= 0.0 && f_high > f_low, "mel filterbank: need 0 <= f_low < f_high");
        require(f_high <= sample_rate_hz / 2.0, "mel filterbank: f_high above Nyquist");
        const double mel_lo = hz_to_mel(f_low);
        const double mel_hi = hz_to_mel(f_high);
        const double step = (mel_hi - mel_lo) / static_cast<double>(n_mels + 1);
        weights_.assign(n_mels * bins_, 0.0);
        for (std::size_t j = 0; j < n_mels; ++j) {
            const double left = mel_lo + step * static_cast<double>(j);
            const double centre = left + step;
            const double right = centre + step;
            bool any = false;
            for (std::size_t k = 0; k < bins_; ++k) {
                const double mel = hz_to_mel(static_cast<double>(k) * sample_rate_hz / static_cast<double>(frame_len));
                double w = 0.0;
                if (mel > left && mel <= centre) {
                    w = (mel - left) / (centre - left);
                } else if (mel > centre && mel < right) {
                    w = (right - mel) / (right - centre);
                }
                weights_[j * bins_ + k] = w;
                any = any || w > 0.0;
            }
            if (!any) {
                throw InvalidArgument("mel filterbank: filter " + std::to_string(j) +
                                      " covers no DFT bin; use fewer filters or a longer frame");
            }
        }
    }

    std::size_t n_mels() const { return n_mels_; }
    std::size_t bins() const { return bins_; }
    double f_low() const { return f_low_; }
    double f_high() const { return f_high_; }
    double weight(std::size_t filter, std::size_t bin) const { return weights_[filter * bins_ + bin]; }

private:
    std::size_t n_mels_;
    double f_low_;
    double f_high_;
    std::size_t bins_;
    std::vector<double> weights_;
};

} // namespace voicekit::dsp

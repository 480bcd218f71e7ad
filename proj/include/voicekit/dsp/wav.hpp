#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <string_view>

#include "voicekit/codec/audio_clip.hpp"
#include "voicekit/detail/kv.hpp"

namespace voicekit::dsp {

// round-half-away(sample * 32767), clamped to the int16 range.
inline std::int16_t quantize_pcm16(double sample)
{
    const long v = std::lround(sample * 32767.0);
    return static_cast<std::int16_t>(std::clamp(v, -32768L, 32767L));
}

namespace detail {

inline void put_u32(std::string& out, std::uint32_t v)
{
    for (int i = 0; i < 4; ++i) {
        out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
    }
}

inline void put_u16(std::string& out, std::uint16_t v)
{
    out.push_back(static_cast<char>(v & 0xFF));
    out.push_back(static_cast<char>((v >> 8) & 0xFF));
}

inline std::uint32_t get_u32(std::string_view b, std::size_t at)
{
    std::uint32_t v = 0;
    for (int i = 3; i >= 0; --i) {
        v = (v << 8) | static_cast<unsigned char>(b[at + static_cast<std::size_t>(i)]);
    }
    return v;
}

inline std::uint16_t get_u16(std::string_view b, std::size_t at)
{
    return static_cast<std::uint16_t>(static_cast<unsigned char>(b[at]) |
                                      (static_cast<unsigned char>(b[at + 1]) << 8));
}

} // namespace detail

// Canonical 44-byte header RIFF/WAVE, PCM format 1, mono, 16 bit, little endian.
inline std::string encode_wav(const AudioClip& clip)
{
    const auto data_bytes = static_cast<std::uint32_t>(clip.samples.size() * 2);
    const auto rate = static_cast<std::uint32_t>(clip.sample_rate_hz);
    std::string out;
    out.reserve(44 + data_bytes);
    out += "RIFF";
    detail::put_u32(out, 36 + data_bytes);
    out += "WAVE";
    out += "fmt ";
    detail::put_u32(out, 16);
    detail::put_u16(out, 1);
    detail::put_u16(out, 1);
    detail::put_u32(out, rate);
    detail::put_u32(out, rate * 2);
    detail::put_u16(out, 2);
    detail::put_u16(out, 16);
    out += "data";
    detail::put_u32(out, data_bytes);
    for (double s : clip.samples) {
        detail::put_u16(out, static_cast<std::uint16_t>(quantize_pcm16(s)));
    }
    return out;
}

// Reads PCM16 mono. Unknown chunks (LIST, fact, ...) are skipped.
inline AudioClip decode_wav(std::string_view b)
{
    if (b.size() < 12 || b.substr(0, 4) != "RIFF" || b.substr(8, 4) != "WAVE") {
        throw FormatError("WAV: missing RIFF/WAVE header");
    }
    std::size_t pos = 12;
    bool have_fmt = false;
    std::uint32_t rate = 0;
    while (pos + 8 <= b.size()) {
        const std::string_view id = b.substr(pos, 4);
        const std::uint32_t size = detail::get_u32(b, pos + 4);
        const std::size_t body = pos + 8;
        if (id == "fmt ") {
            if (size < 16 || body + 16 > b.size()) {
                throw FormatError("WAV: truncated fmt chunk");
            }
            const auto format = detail::get_u16(b, body);
            const auto channels = detail::get_u16(b, body + 2);
            rate = detail::get_u32(b, body + 4);
            const auto bits = detail::get_u16(b, body + 14);
            if (format != 1) {
                throw UnsupportedFormat("WAV: codec " + std::to_string(format) + " is not PCM");
            }
            if (channels != 1) {
                throw UnsupportedFormat("WAV: " + std::to_string(channels) + " channels, only mono is supported");
            }
            if (bits != 16) {
                throw UnsupportedFormat("WAV: " + std::to_string(bits) + "-bit samples, only 16-bit is supported");
            }
            if (rate == 0) {
                throw FormatError("WAV: zero sample rate");
            }
            have_fmt = true;
        } else if (id == "data") {
            if (!have_fmt) {
                throw FormatError("WAV: data chunk before fmt chunk");
            }
            if (body + size > b.size() || size % 2 != 0) {
                throw FormatError("WAV: truncated data chunk");
            }
            AudioClip clip;
            clip.sample_rate_hz = static_cast<int>(rate);
            clip.samples.resize(size / 2);
            for (std::size_t i = 0; i < clip.samples.size(); ++i) {
                const auto v = static_cast<std::int16_t>(detail::get_u16(b, body + 2 * i));
                clip.samples[i] = std::max(-1.0, v / 32767.0);
            }
            return clip;
        }
        pos = body + size + (size & 1);
    }
    throw FormatError("WAV: no data chunk");
}

inline void wav_write(const AudioClip& clip, const std::string& path)
{
    voicekit::detail::write_file_atomic(path, encode_wav(clip));
}

inline AudioClip wav_read(const std::string& path) { return decode_wav(voicekit::detail::read_file(path)); }

} // namespace voicekit::dsp

#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "voicekit/codec/position_frequency.hpp"
#include "voicekit/detail/kv.hpp"

namespace voicekit {

// Everything that determines how an image sounds.
struct EncodingScheme {
    std::string name;
    PositionFrequencyMap pf = ExponentialMap{};
    double duration_s = 1.05;
    int sample_rate_hz = 16000;
    // Fraction of one column's duration spent ramping amplitude across each column boundary.
    double crossfade_fraction = 0.1;

    // round-half-away(duration * rate)
    std::size_t sample_count() const
    {
        return static_cast<std::size_t>(std::llround(duration_s * sample_rate_hz));
    }

    friend bool operator==(const EncodingScheme&, const EncodingScheme&) = default;
};

inline void validate(const EncodingScheme& scheme)
{
    validate(scheme.pf);
    require(scheme.duration_s > 0.0 && std::isfinite(scheme.duration_s), "scheme: duration_s must be > 0");
    require(scheme.sample_rate_hz > 0, "scheme: sample_rate_hz must be > 0");
    require(scheme.crossfade_fraction >= 0.0 && scheme.crossfade_fraction < 0.5,
            "scheme: crossfade_fraction must be in [0, 0.5)");
}

namespace presets {

inline EncodingScheme primary()
{
    return {"PRIMARY", ExponentialMap{500.0, 5000.0}, 1.05, 16000, 0.1};
}

inline EncodingScheme long_duration()
{
    return {"LONG", ExponentialMap{500.0, 5000.0}, 2.0, 16000, 0.1};
}

inline EncodingScheme tanh()
{
    return {"TANH", RectifiedTanhMap{7000.0, 0.035}, 1.05, 16000, 0.1};
}

inline std::vector<EncodingScheme> all() { return {primary(), long_duration(), tanh()}; }

inline std::optional<EncodingScheme> find(const std::string& name)
{
    for (auto& s : all()) {
        if (s.name == name) {
            return s;
        }
    }
    return std::nullopt;
}

} // namespace presets

// Key-value document:
//   name, pf.kind (exponential | rectified_tanh), pf.f_min/pf.f_max or pf.s/pf.alpha,
//   duration_s, sample_rate_hz, crossfade_fraction
inline detail::KeyValues scheme_to_kv(const EncodingScheme& scheme)
{
    detail::KeyValues kv;
    kv.set("name", scheme.name);
    if (const auto* e = std::get_if<ExponentialMap>(&scheme.pf)) {
        kv.set("pf.kind", "exponential");
        kv.set("pf.f_min", e->f_min);
        kv.set("pf.f_max", e->f_max);
    } else {
        const auto& t = std::get<RectifiedTanhMap>(scheme.pf);
        kv.set("pf.kind", "rectified_tanh");
        kv.set("pf.s", t.range_hz);
        kv.set("pf.alpha", t.alpha);
    }
    kv.set("duration_s", scheme.duration_s);
    kv.set("sample_rate_hz", scheme.sample_rate_hz);
    kv.set("crossfade_fraction", scheme.crossfade_fraction);
    return kv;
}

inline std::string serialize_scheme(const EncodingScheme& scheme) { return scheme_to_kv(scheme).str(); }

inline EncodingScheme scheme_from_kv(const detail::KeyValues& kv)
{
    EncodingScheme s;
    s.name = kv.get("name");
    const auto& kind = kv.get("pf.kind");
    if (kind == "exponential") {
        s.pf = ExponentialMap{kv.get_double("pf.f_min"), kv.get_double("pf.f_max")};
    } else if (kind == "rectified_tanh") {
        s.pf = RectifiedTanhMap{kv.get_double("pf.s"), kv.get_double("pf.alpha")};
    } else {
        throw FormatError("unknown pf.kind '" + kind + "'");
    }
    s.duration_s = kv.get_double("duration_s");
    s.sample_rate_hz = static_cast<int>(kv.get_int("sample_rate_hz"));
    s.crossfade_fraction = kv.get_double("crossfade_fraction");
    validate(s);
    return s;
}

inline EncodingScheme parse_scheme(std::string_view text) { return scheme_from_kv(detail::KeyValues::parse(text)); }

// A preset name (PRIMARY, LONG, TANH) or a path to a scheme file.
inline EncodingScheme load_scheme(const std::string& preset_or_path)
{
    if (auto p = presets::find(preset_or_path)) {
        return *p;
    }
    return parse_scheme(detail::read_file(preset_or_path));
}

// Stable identity of the scheme's sound, used in cache keys.
inline std::string scheme_hash(const EncodingScheme& scheme)
{
    static const char* digits = "0123456789abcdef";
    std::uint64_t h = detail::fnv1a(serialize_scheme(scheme));
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i) {
        out[static_cast<std::size_t>(i)] = digits[h & 0xF];
        h >>= 4;
    }
    return out;
}

} // namespace voicekit

#pragma once

#include <cctype>
#include <string>
#include <string_view>

#include "voicekit/codec/gray_image.hpp"
#include "voicekit/detail/kv.hpp"

namespace voicekit {

// Binary PGM (P5), maxval 255.
inline std::string encode_pgm(const GrayImage& image)
{
    std::string out = "P5\n" + std::to_string(image.cols()) + " " + std::to_string(image.rows()) + "\n255\n";
    const auto px = image.pixels();
    out.append(reinterpret_cast<const char*>(px.data()), px.size());
    return out;
}

inline GrayImage decode_pgm(std::string_view bytes)
{
    std::size_t pos = 0;
    auto skip_space_and_comments = [&] {
        while (pos < bytes.size()) {
            if (bytes[pos] == '#') {
                while (pos < bytes.size() && bytes[pos] != '\n') {
                    ++pos;
                }
            } else if (std::isspace(static_cast<unsigned char>(bytes[pos]))) {
                ++pos;
            } else {
                break;
            }
        }
    };
    auto read_number = [&](const char* what) {
        skip_space_and_comments();
        const std::size_t start = pos;
        while (pos < bytes.size() && std::isdigit(static_cast<unsigned char>(bytes[pos]))) {
            ++pos;
        }
        if (start == pos) {
            throw FormatError(std::string("PGM: missing ") + what);
        }
        return detail::parse_int(bytes.substr(start, pos - start), what);
    };

    if (bytes.size() < 2 || bytes.substr(0, 2) != "P5") {
        if (bytes.size() >= 2 && bytes[0] == 'P' && std::isdigit(static_cast<unsigned char>(bytes[1]))) {
            throw UnsupportedFormat("PGM: only binary P5 is supported");
        }
        throw FormatError("PGM: bad magic");
    }
    pos = 2;
    const auto width = read_number("width");
    const auto height = read_number("height");
    const auto maxval = read_number("maxval");
    if (maxval != 255) {
        throw UnsupportedFormat("PGM: maxval must be 255, got " + std::to_string(maxval));
    }
    if (pos >= bytes.size() || !std::isspace(static_cast<unsigned char>(bytes[pos]))) {
        throw FormatError("PGM: missing separator after header");
    }
    ++pos;
    const auto count = static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
    if (bytes.size() - pos < count) {
        throw FormatError("PGM: truncated pixel data");
    }
    std::vector<std::uint8_t> px(count);
    for (std::size_t i = 0; i < count; ++i) {
        px[i] = static_cast<std::uint8_t>(bytes[pos + i]);
    }
    return GrayImage(static_cast<int>(height), static_cast<int>(width), std::move(px));
}

inline void write_pgm(const GrayImage& image, const std::string& path)
{
    detail::write_file_atomic(path, encode_pgm(image));
}

inline GrayImage read_pgm(const std::string& path) { return decode_pgm(detail::read_file(path)); }

} // namespace voicekit

#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "voicekit/error.hpp"

namespace voicekit {

// Grayscale brightness matrix, row 0 is the top row as displayed.
// 0 is black, 255 is white.
class GrayImage {
public:
    GrayImage(int rows, int cols, std::uint8_t fill = 0)
        : rows_(rows), cols_(cols)
    {
        check_shape(rows, cols);
        pixels_.assign(static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols), fill);
    }

    GrayImage(int rows, int cols, std::vector<std::uint8_t> pixels)
        : rows_(rows), cols_(cols), pixels_(std::move(pixels))
    {
        check_shape(rows, cols);
        require(pixels_.size() == static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols),
                "GrayImage: pixel count does not match rows*cols");
    }

    int rows() const { return rows_; }
    int cols() const { return cols_; }

    std::uint8_t at(int r, int c) const { return pixels_[index(r, c)]; }
    std::uint8_t& at(int r, int c) { return pixels_[index(r, c)]; }

    std::span<const std::uint8_t> pixels() const { return pixels_; }
    std::span<std::uint8_t> pixels() { return pixels_; }

    GrayImage transposed() const
    {
        GrayImage t(cols_, rows_);
        for (int r = 0; r < rows_; ++r) {
            for (int c = 0; c < cols_; ++c) {
                t.at(c, r) = at(r, c);
            }
        }
        return t;
    }

    GrayImage mirrored() const
    {
        GrayImage m(rows_, cols_);
        for (int r = 0; r < rows_; ++r) {
            for (int c = 0; c < cols_; ++c) {
                m.at(r, cols_ - 1 - c) = at(r, c);
            }
        }
        return m;
    }

    friend bool operator==(const GrayImage&, const GrayImage&) = default;

private:
    static void check_shape(int rows, int cols)
    {
        if (rows < 2 || cols < 1) {
            throw InvalidArgument("GrayImage: need rows >= 2 and cols >= 1, got " + std::to_string(rows) + "x" +
                                  std::to_string(cols));
        }
    }

    std::size_t index(int r, int c) const
    {
        return static_cast<std::size_t>(r) * static_cast<std::size_t>(cols_) + static_cast<std::size_t>(c);
    }

    int rows_;
    int cols_;
    std::vector<std::uint8_t> pixels_;
};

} // namespace voicekit

#pragma once

#include <cmath>
#include <numbers>
#include <vector>

#include "voicekit/codec/gray_image.hpp"

namespace voicekit::stimuli {

struct Point {
    double x = 0.0;
    double y = 0.0;
};

// sin/cos with exact zeros at multiples of 90 degrees, so axis-aligned figures
// rasterize without rounding noise.
inline void sincos_deg(double deg, double& s, double& c)
{
    const double rad = deg * std::numbers::pi / 180.0;
    s = std::sin(rad);
    c = std::cos(rad);
    if (std::abs(s) < 1e-12) {
        s = 0.0;
    }
    if (std::abs(c) < 1e-12) {
        c = 0.0;
    }
}

// Even-odd point in polygon test.
inline bool inside_polygon(const std::vector<Point>& poly, Point p)
{
    bool in = false;
    for (std::size_t i = 0, j = poly.size() - 1; i < poly.size(); j = i++) {
        const Point a = poly[i];
        const Point b = poly[j];
        if ((a.y > p.y) != (b.y > p.y)) {
            const double x = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y);
            if (p.x < x) {
                in = !in;
            }
        }
    }
    return in;
}

// Binary masks are sampled at pixel centres (x + 0.5, y + 0.5).
template <typename Inside>
void paint(GrayImage& image, Inside&& inside)
{
    for (int r = 0; r < image.rows(); ++r) {
        for (int c = 0; c < image.cols(); ++c) {
            if (inside(Point{c + 0.5, r + 0.5})) {
                image.at(r, c) = 255;
            }
        }
    }
}

inline void fill_circle(GrayImage& image, Point centre, double radius)
{
    paint(image, [&](Point p) {
        const double dx = p.x - centre.x;
        const double dy = p.y - centre.y;
        return dx * dx + dy * dy <= radius * radius;
    });
}

inline void fill_polygon(GrayImage& image, const std::vector<Point>& poly)
{
    paint(image, [&](Point p) { return inside_polygon(poly, p); });
}

// Bar of the given length and thickness through `centre`. 0 degrees is vertical,
// positive angles rotate clockwise as displayed. The length test is symmetric
// and the thickness test half-open, so an axis-aligned bar with an even length
// and any thickness covers exactly length x thickness pixels.
inline void fill_bar(GrayImage& image, Point centre, double length, double thickness, double orientation_deg)
{
    double s = 0.0;
    double c = 0.0;
    sincos_deg(orientation_deg, s, c);
    // along: direction of the bar's upper end; across: its clockwise normal.
    const Point along{s, -c};
    const Point across{c, s};
    paint(image, [&](Point p) {
        const double dx = p.x - centre.x;
        const double dy = p.y - centre.y;
        const double u = dx * along.x + dy * along.y;
        const double v = dx * across.x + dy * across.y;
        return std::abs(u) <= length / 2 && v >= -thickness / 2 && v < thickness / 2;
    });
}

} // namespace voicekit::stimuli

#pragma once

#include <vector>

#include "voicekit/stimuli/raster.hpp"
#include "voicekit/stimuli/spec.hpp"

namespace voicekit::stimuli {

// Silhouette templates in a unit frame: u to the right, v up, extent about [-1, 1].
// Primitives are applied in order; a subtractive primitive clears what came before.
struct Primitive {
    enum class Kind { Polygon, Ellipse } kind = Kind::Polygon;
    std::vector<Point> vertices;  // Polygon
    Point centre{};               // Ellipse
    double rx = 0.0;
    double ry = 0.0;
    bool additive = true;

    bool contains(Point p) const
    {
        if (kind == Kind::Ellipse) {
            const double a = (p.x - centre.x) / rx;
            const double b = (p.y - centre.y) / ry;
            return a * a + b * b <= 1.0;
        }
        return inside_polygon(vertices, p);
    }
};

using Template = std::vector<Primitive>;

namespace detail {

inline Primitive rect(double u0, double v0, double u1, double v1, bool additive = true)
{
    return {Primitive::Kind::Polygon, {{u0, v0}, {u1, v0}, {u1, v1}, {u0, v1}}, {}, 0, 0, additive};
}

inline Primitive poly(std::vector<Point> pts, bool additive = true)
{
    return {Primitive::Kind::Polygon, std::move(pts), {}, 0, 0, additive};
}

inline Primitive ellipse(double u, double v, double rx, double ry, bool additive = true)
{
    return {Primitive::Kind::Ellipse, {}, {u, v}, rx, ry, additive};
}

inline Primitive circle(double u, double v, double r, bool additive = true) { return ellipse(u, v, r, r, additive); }

} // namespace detail

// One template per entry of object_classes(), same order.
inline const std::vector<Template>& object_templates()
{
    using namespace detail;
    static const std::vector<Template> templates = {
        // car
        {rect(-0.9, -0.3, 0.9, 0.2), poly({{-0.5, 0.2}, {0.4, 0.2}, {0.25, 0.6}, {-0.35, 0.6}}),
         circle(-0.5, -0.35, 0.22), circle(0.5, -0.35, 0.22)},
        // cat
        {ellipse(0.0, -0.35, 0.55, 0.5), circle(0.0, 0.35, 0.42), poly({{-0.38, 0.55}, {-0.1, 0.72}, {-0.35, 0.95}}),
         poly({{0.38, 0.55}, {0.1, 0.72}, {0.35, 0.95}}), ellipse(0.55, 0.2, 0.15, 0.3)},
        // bottle
        {rect(-0.3, -0.95, 0.3, 0.35), poly({{-0.3, 0.35}, {0.3, 0.35}, {0.12, 0.6}, {-0.12, 0.6}}),
         rect(-0.12, 0.6, 0.12, 0.95)},
        // cup
        {circle(0.55, 0.0, 0.35), circle(0.55, 0.0, 0.18, false),
         poly({{-0.55, 0.6}, {0.45, 0.6}, {0.35, -0.7}, {-0.45, -0.7}})},
        // block
        {rect(-0.6, -0.6, 0.6, 0.6), poly({{-0.6, 0.6}, {0.6, 0.6}, {0.85, 0.85}, {-0.35, 0.85}}),
         poly({{0.6, -0.6}, {0.85, -0.35}, {0.85, 0.85}, {0.6, 0.6}})},
        // duck
        {ellipse(0.0, -0.3, 0.75, 0.45), circle(0.45, 0.35, 0.3), poly({{0.7, 0.4}, {1.0, 0.3}, {0.7, 0.25}}),
         poly({{-0.75, -0.2}, {-0.95, 0.15}, {-0.55, 0.0}})},
        // pot
        {ellipse(0.0, -0.2, 0.8, 0.6), rect(-0.55, 0.3, 0.55, 0.45), circle(0.0, 0.55, 0.12),
         rect(-0.98, -0.1, -0.75, 0.05), rect(0.75, -0.1, 0.98, 0.05)},
        // jar
        {rect(-0.55, -0.9, 0.55, 0.55), rect(-0.45, 0.55, 0.45, 0.85), ellipse(0.0, -0.9, 0.55, 0.1)},
        // tool (open-ended wrench)
        {poly({{-0.85, -0.71}, {-0.71, -0.85}, {0.45, 0.31}, {0.31, 0.45}}), circle(0.5, 0.5, 0.35),
         poly({{0.5, 0.5}, {0.95, 0.7}, {0.7, 0.95}}, false)},
        // toy (teddy)
        {circle(0.0, 0.5, 0.3), circle(-0.28, 0.78, 0.12), circle(0.28, 0.78, 0.12), ellipse(0.0, -0.2, 0.45, 0.5),
         ellipse(-0.55, -0.05, 0.2, 0.12), ellipse(0.55, -0.05, 0.2, 0.12), circle(-0.3, -0.75, 0.2),
         circle(0.3, -0.75, 0.2)},
    };
    return templates;
}

inline bool template_contains(const Template& t, Point uv)
{
    bool in = false;
    for (const auto& p : t) {
        if (p.additive) {
            in = in || p.contains(uv);
        } else if (p.contains(uv)) {
            in = false;
        }
    }
    return in;
}

// Template silhouette rotated in-plane by pose_deg (counter-clockwise as displayed),
// scaled, and shifted by (dx, dy) pixels from the image centre.
inline GrayImage render_object(const Template& t, int size, double pose_deg, double dx, double dy, double scale)
{
    GrayImage image(size, size);
    double s = 0.0;
    double c = 0.0;
    sincos_deg(pose_deg, s, c);
    const double radius = 0.34 * size * scale;
    const double cx = size / 2.0 + dx;
    const double cy = size / 2.0 + dy;
    paint(image, [&](Point p) {
        // Into a y-up frame around the centre, then undo the rotation.
        const double x = p.x - cx;
        const double y = cy - p.y;
        const double u = (c * x + s * y) / radius;
        const double v = (-s * x + c * y) / radius;
        return template_contains(t, {u, v});
    });
    return image;
}

} // namespace voicekit::stimuli

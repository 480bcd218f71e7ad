#pragma once

#include <cmath>
#include <vector>

#include "voicekit/codec/gray_image.hpp"
#include "voicekit/stimuli/objects.hpp"
#include "voicekit/stimuli/raster.hpp"
#include "voicekit/stimuli/spec.hpp"

namespace voicekit::stimuli {

struct Stimulus {
    StimulusSpec spec;
    GrayImage image;
};

inline constexpr double kBarThicknessPx = 3.0;

// Bar lengths are rounded to even pixel counts (see fill_bar).
inline double even_length(double px) { return 2.0 * std::round(px / 2.0); }

namespace detail {

inline GrayImage flipped_vertically(const GrayImage& image)
{
    GrayImage out(image.rows(), image.cols());
    for (int r = 0; r < image.rows(); ++r) {
        for (int c = 0; c < image.cols(); ++c) {
            out.at(image.rows() - 1 - r, c) = image.at(r, c);
        }
    }
    return out;
}

inline GrayImage render_l(int size, bool upside_down, bool backward)
{
    GrayImage image(size, size);
    const double s = size;
    const double h = 0.6 * s;
    const double w = 0.45 * s;
    const double t = 0.14 * s;
    const double x0 = s / 2 - w / 2;
    const double y0 = s / 2 - h / 2;
    fill_polygon(image, {{x0, y0}, {x0 + t, y0}, {x0 + t, y0 + h}, {x0, y0 + h}});
    fill_polygon(image, {{x0, y0 + h - t}, {x0 + w, y0 + h - t}, {x0 + w, y0 + h}, {x0, y0 + h}});
    if (upside_down) {
        image = flipped_vertically(image);
    }
    if (backward) {
        image = image.mirrored();
    }
    return image;
}

inline Point location_centre(const std::string& label, double s)
{
    const double lo = 0.27 * s;
    const double hi = 0.73 * s;
    if (label == "upper-left") return {lo, lo};
    if (label == "upper-right") return {hi, lo};
    if (label == "bottom-left") return {lo, hi};
    if (label == "bottom-right") return {hi, hi};
    return {s / 2, s / 2};
}

inline std::size_t object_index(const std::string& label)
{
    const auto& names = object_classes();
    return static_cast<std::size_t>(std::find(names.begin(), names.end(), label) - names.begin());
}

} // namespace detail

// White figure on a black background, deterministic in (spec, size).
inline GrayImage render_shape(const StimulusSpec& spec, int size)
{
    require(size >= 32, "render_shape: size must be >= 32");
    if (!label_in_lesson(spec.lesson, spec.label)) {
        throw InvalidArgument("render_shape: '" + spec.label + "' is not a " + std::string(lesson_name(spec.lesson)) +
                              " stimulus");
    }
    const double s = size;
    const Point centre{s / 2, s / 2};
    GrayImage image(size, size);
    switch (spec.lesson) {
    case Lesson::Shapes:
        if (spec.label == "circle") {
            fill_circle(image, centre, 0.3 * s);
        } else if (spec.label == "square") {
            const double h = 0.28 * s;
            fill_polygon(image, {{centre.x - h, centre.y - h}, {centre.x + h, centre.y - h},
                                 {centre.x + h, centre.y + h}, {centre.x - h, centre.y + h}});
        } else {
            fill_polygon(image, {{centre.x, centre.y - 0.32 * s}, {centre.x + 0.34 * s, centre.y + 0.28 * s},
                                 {centre.x - 0.34 * s, centre.y + 0.28 * s}});
        }
        return image;
    case Lesson::LShapes:
        return detail::render_l(size, spec.label.find("upside_down") != std::string::npos,
                                spec.label.find("backward") != std::string::npos);
    case Lesson::Orientation:
    case Lesson::Length:
        fill_bar(image, centre, spec.param("length_px"), spec.param("thickness_px"), spec.param("orientation_deg"));
        return image;
    case Lesson::Location:
        fill_circle(image, detail::location_centre(spec.label, s), 0.15 * s);
        return image;
    case Lesson::Objects:
        return render_object(object_templates()[detail::object_index(spec.label)], size, spec.param("pose_deg"),
                             spec.param("dx"), spec.param("dy"), spec.param("scale"));
    }
    return image;
}

// The fixed stimulus set of one preliminary lesson, in label order.
inline std::vector<Stimulus> gen_lesson_set(Lesson lesson, int size)
{
    require(lesson != Lesson::Objects, "gen_lesson_set: objects are not a preliminary lesson");
    static constexpr double kLengthFractions[] = {0.25, 0.375, 0.5, 0.625, 0.75};
    static constexpr double kLengthOrientations[] = {0.0, 90.0, 45.0, -45.0, 0.0};

    std::vector<Stimulus> out;
    const auto& labels = lesson_labels(lesson);
    for (std::size_t k = 0; k < labels.size(); ++k) {
        StimulusSpec spec{lesson, labels[k], {}};
        if (lesson == Lesson::Orientation) {
            spec.params = {{"orientation_deg", std::stod(labels[k])},
                           {"length_px", even_length(0.6 * size)},
                           {"thickness_px", kBarThicknessPx}};
        } else if (lesson == Lesson::Length) {
            spec.params = {{"orientation_deg", kLengthOrientations[k]},
                           {"length_px", even_length(kLengthFractions[k] * size)},
                           {"thickness_px", kBarThicknessPx}};
        }
        GrayImage image = render_shape(spec, size);
        out.push_back({std::move(spec), std::move(image)});
    }
    return out;
}

} // namespace voicekit::stimuli

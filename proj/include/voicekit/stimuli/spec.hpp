#pragma once

#include <algorithm>
#include <array>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "voicekit/error.hpp"

namespace voicekit::stimuli {

enum class Lesson { Shapes, LShapes, Orientation, Length, Location, Objects };

inline constexpr std::array<Lesson, 5> kPreliminaryLessons = {Lesson::Shapes, Lesson::LShapes, Lesson::Orientation,
                                                              Lesson::Length, Lesson::Location};

inline std::string_view lesson_name(Lesson lesson)
{
    switch (lesson) {
    case Lesson::Shapes: return "shapes";
    case Lesson::LShapes: return "lshapes";
    case Lesson::Orientation: return "orientation";
    case Lesson::Length: return "length";
    case Lesson::Location: return "location";
    case Lesson::Objects: return "objects";
    }
    return "?";
}

inline Lesson parse_lesson(std::string_view name)
{
    for (auto l : {Lesson::Shapes, Lesson::LShapes, Lesson::Orientation, Lesson::Length, Lesson::Location,
                   Lesson::Objects}) {
        if (lesson_name(l) == name) {
            return l;
        }
    }
    throw InvalidArgument("unknown lesson '" + std::string(name) + "'");
}

inline const std::vector<std::string>& object_classes()
{
    static const std::vector<std::string> names = {"car", "cat", "bottle", "cup", "block",
                                                   "duck", "pot", "jar", "tool", "toy"};
    return names;
}

// The closed answer set of each lesson.
inline const std::vector<std::string>& lesson_labels(Lesson lesson)
{
    static const std::vector<std::string> shapes = {"circle", "triangle", "square"};
    static const std::vector<std::string> lshapes = {"L", "upside_down_L", "backward_L", "backward_upside_down_L"};
    static const std::vector<std::string> orientation = {"0", "22", "-22", "45", "-45", "90"};
    static const std::vector<std::string> length = {"length1", "length2", "length3", "length4", "length5"};
    static const std::vector<std::string> location = {"upper-left", "upper-right", "bottom-left", "bottom-right",
                                                      "center"};
    switch (lesson) {
    case Lesson::Shapes: return shapes;
    case Lesson::LShapes: return lshapes;
    case Lesson::Orientation: return orientation;
    case Lesson::Length: return length;
    case Lesson::Location: return location;
    case Lesson::Objects: return object_classes();
    }
    return shapes;
}

inline bool label_in_lesson(Lesson lesson, const std::string& label)
{
    const auto& labels = lesson_labels(lesson);
    return std::find(labels.begin(), labels.end(), label) != labels.end();
}

struct StimulusSpec {
    Lesson lesson = Lesson::Shapes;
    std::string label;
    // orientation_deg, length_px, thickness_px (bars); pose_deg, dx, dy, scale (objects)
    std::map<std::string, double> params;

    double param(const std::string& key) const
    {
        const auto it = params.find(key);
        if (it == params.end()) {
            throw InvalidArgument("stimulus '" + label + "' lacks parameter '" + key + "'");
        }
        return it->second;
    }

    friend bool operator==(const StimulusSpec&, const StimulusSpec&) = default;
};

} // namespace voicekit::stimuli

#pragma once

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "voicekit/codec/pgm.hpp"
#include "voicekit/detail/kv.hpp"
#include "voicekit/detail/rng.hpp"
#include "voicekit/stimuli/lessons.hpp"

namespace voicekit::stimuli {

enum class Split { Train, Test };

inline std::string_view split_name(Split s) { return s == Split::Train ? "train" : "test"; }

struct CorpusItem {
    std::string id;
    StimulusSpec spec;
    GrayImage image;
    Split split = Split::Train;
    std::string path; // relative to the manifest's directory once written
};

struct StimulusCorpus {
    std::vector<CorpusItem> items;
    std::uint64_t seed = 0;

    const CorpusItem* find(const std::string& id) const
    {
        for (const auto& item : items) {
            if (item.id == id) {
                return &item;
            }
        }
        return nullptr;
    }

    std::vector<const CorpusItem*> of_lesson(Lesson lesson) const
    {
        std::vector<const CorpusItem*> out;
        for (const auto& item : items) {
            if (item.spec.lesson == lesson) {
                out.push_back(&item);
            }
        }
        return out;
    }

    std::size_t count(Split split) const
    {
        std::size_t n = 0;
        for (const auto& item : items) {
            n += item.split == split ? 1 : 0;
        }
        return n;
    }
};

inline constexpr int kTestPerClass = 10;
inline constexpr double kPoseStepDeg = 5.0;

// Pose indices held out for testing: ten evenly spread poses.
inline std::vector<int> test_pose_indices(int per_class)
{
    std::vector<int> out;
    for (int j = 0; j < kTestPerClass; ++j) {
        out.push_back((2 * j + 1) * per_class / (2 * kTestPerClass));
    }
    return out;
}

// Per class, per_class poses 5 degrees apart with seeded jitter (+-2 px shift,
// +-5% scale). Ten evenly spaced poses per class form the test split.
inline StimulusCorpus gen_object_corpus(int n_classes, int per_class, int size, std::uint64_t seed)
{
    require(n_classes >= 1 && n_classes <= static_cast<int>(object_templates().size()),
            "gen_object_corpus: at most " + std::to_string(object_templates().size()) + " object classes available");
    require(per_class >= kTestPerClass + 1, "gen_object_corpus: per_class must be >= 11 to hold out 10 test poses");
    require(size >= 32, "gen_object_corpus: size must be >= 32");

    StimulusCorpus corpus;
    corpus.seed = seed;
    voicekit::detail::Rng rng(seed);
    const auto held_out = test_pose_indices(per_class);
    for (int c = 0; c < n_classes; ++c) {
        const std::string& label = object_classes()[static_cast<std::size_t>(c)];
        for (int k = 0; k < per_class; ++k) {
            StimulusSpec spec{Lesson::Objects, label, {}};
            spec.params["pose_deg"] = kPoseStepDeg * k;
            spec.params["dx"] = static_cast<double>(rng.between(-2, 2));
            spec.params["dy"] = static_cast<double>(rng.between(-2, 2));
            spec.params["scale"] = rng.uniform(0.95, 1.05);
            char id[64];
            std::snprintf(id, sizeof id, "%s_%03d", label.c_str(), k);
            const bool test = std::find(held_out.begin(), held_out.end(), k) != held_out.end();
            GrayImage image = render_shape(spec, size);
            corpus.items.push_back({id, std::move(spec), std::move(image), test ? Split::Test : Split::Train,
                                    std::string("images/") + id + ".pgm"});
        }
    }
    return corpus;
}

inline StimulusCorpus gen_lesson_corpus(int size)
{
    StimulusCorpus corpus;
    for (Lesson lesson : kPreliminaryLessons) {
        for (auto& stim : gen_lesson_set(lesson, size)) {
            std::string id = std::string(lesson_name(lesson)) + "_" + stim.spec.label;
            corpus.items.push_back({id, std::move(stim.spec), std::move(stim.image), Split::Train,
                                    "images/" + id + ".pgm"});
        }
    }
    return corpus;
}

// Union of corpora; ids must stay unique.
inline StimulusCorpus merge_corpora(StimulusCorpus a, const StimulusCorpus& b)
{
    for (const auto& item : b.items) {
        if (a.find(item.id) != nullptr) {
            throw InvalidArgument("merge_corpora: duplicate id '" + item.id + "'");
        }
        a.items.push_back(item);
    }
    return a;
}

inline std::string params_field(const StimulusSpec& spec)
{
    std::string out;
    for (const auto& [k, v] : spec.params) {
        if (!out.empty()) {
            out += ";";
        }
        out += k + "=" + voicekit::detail::format_double(v);
    }
    return out;
}

// Manifest: id,label,lesson,path,split,params where params is "key=value;key=value".
inline std::string manifest_csv(const StimulusCorpus& corpus)
{
    std::string out = "id,label,lesson,path,split,params\n";
    for (const auto& item : corpus.items) {
        out += item.id + "," + item.spec.label + "," + std::string(lesson_name(item.spec.lesson)) + "," + item.path +
               "," + std::string(split_name(item.split)) + "," + params_field(item.spec) + "\n";
    }
    return out;
}

// Writes <dir>/manifest.csv and one PGM per item; returns the manifest path.
inline std::string write_corpus(const StimulusCorpus& corpus, const std::string& dir)
{
    namespace fs = std::filesystem;
    fs::create_directories(dir);
    for (const auto& item : corpus.items) {
        const fs::path p = fs::path(dir) / item.path;
        fs::create_directories(p.parent_path());
        write_pgm(item.image, p.string());
    }
    const std::string manifest = (fs::path(dir) / "manifest.csv").string();
    voicekit::detail::write_file_atomic(manifest, manifest_csv(corpus));
    return manifest;
}

// Reads a manifest and every image it names. Paths are relative to the manifest.
inline StimulusCorpus load_corpus(const std::string& manifest_path)
{
    namespace fs = std::filesystem;
    const std::string text = voicekit::detail::read_file(manifest_path);
    const fs::path base = fs::path(manifest_path).parent_path();
    StimulusCorpus corpus;
    std::set<std::string> ids;
    std::size_t line_no = 0;
    for (const auto& raw : voicekit::detail::split(text, '\n')) {
        ++line_no;
        const std::string line = voicekit::detail::trim(raw);
        if (line.empty() || (line_no == 1 && line.rfind("id,", 0) == 0)) {
            continue;
        }
        const auto fields = voicekit::detail::split(line, ',');
        if (fields.size() < 5) {
            throw FormatError("manifest line " + std::to_string(line_no) + ": expected id,label,lesson,path,split");
        }
        CorpusItem item{fields[0], {parse_lesson(fields[2]), fields[1], {}}, GrayImage(2, 1), Split::Train, fields[3]};
        if (fields[4] == "test") {
            item.split = Split::Test;
        } else if (fields[4] != "train") {
            throw FormatError("manifest line " + std::to_string(line_no) + ": split must be train or test");
        }
        if (fields.size() >= 6 && !voicekit::detail::trim(fields[5]).empty()) {
            for (const auto& kv : voicekit::detail::split(fields[5], ';')) {
                const auto eq = kv.find('=');
                if (eq == std::string::npos) {
                    throw FormatError("manifest line " + std::to_string(line_no) + ": bad params entry '" + kv + "'");
                }
                item.spec.params[kv.substr(0, eq)] = voicekit::detail::parse_double(kv.substr(eq + 1), kv.substr(0, eq));
            }
        }
        if (!ids.insert(item.id).second) {
            throw FormatError("manifest: duplicate id '" + item.id + "'");
        }
        item.image = read_pgm((base / item.path).string());
        corpus.items.push_back(std::move(item));
    }
    return corpus;
}

} // namespace voicekit::stimuli

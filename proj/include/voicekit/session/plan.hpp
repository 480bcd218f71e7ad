#pragma once

#include <algorithm>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "voicekit/detail/rng.hpp"
#include "voicekit/stimuli/corpus.hpp"

namespace voicekit::session {

inline constexpr int kPlaysPerLessonStimulus = 15;
inline constexpr int kDefaultTrainingQuota = 15;

enum class PhaseKind { Lesson, Rest, AdvancedTraining, Testing, Complete };

struct PlannedTrial {
    std::string stimulus_id;
    std::string truth_label;
    PhaseKind kind = PhaseKind::Lesson;
    std::string phase;             // "lesson1".."lesson5", "advanced_training:<k>", "testing"
    bool rest_before = false;      // first trial after a lesson's rest break
    std::size_t phase_begin = 0;   // index of the phase's first trial
    std::size_t phase_size = 0;
    std::shared_ptr<const std::vector<std::string>> options; // answer set of the phase
};

struct Plan {
    std::vector<PlannedTrial> trials;
    std::vector<std::string> object_labels;
};

inline std::string lesson_phase(std::size_t k) { return "lesson" + std::to_string(k + 1); }
inline std::string training_phase(std::size_t k) { return "advanced_training:" + std::to_string(k); }

// The whole protocol as a fixed sequence, a pure function of (corpus, seed, quota):
//   five lessons, each stimulus played 15 times in seeded random order, with a rest after each;
//   advanced training, class by class, `training_quota` plays over the class's training poses in pose order;
//   testing, every held-out object image once in seeded random order.
inline Plan make_plan(const stimuli::StimulusCorpus& corpus, std::uint64_t seed, int training_quota)
{
    require(training_quota >= 1, "session: training quota must be >= 1");
    Plan plan;
    detail::Rng rng(seed);

    auto add_phase = [&](std::vector<PlannedTrial> block, bool rest_before) {
        const std::size_t begin = plan.trials.size();
        for (std::size_t i = 0; i < block.size(); ++i) {
            block[i].rest_before = rest_before && i == 0;
            block[i].phase_begin = begin;
            block[i].phase_size = block.size();
            plan.trials.push_back(std::move(block[i]));
        }
    };

    for (std::size_t k = 0; k < stimuli::kPreliminaryLessons.size(); ++k) {
        const auto lesson = stimuli::kPreliminaryLessons[k];
        const auto items = corpus.of_lesson(lesson);
        const auto& labels = stimuli::lesson_labels(lesson);
        for (const auto& label : labels) {
            const bool present = std::any_of(items.begin(), items.end(), [&](auto* it) { return it->spec.label == label; });
            if (!present || items.size() != labels.size()) {
                throw InvalidArgument("session: corpus lacks the complete " +
                                      std::string(stimuli::lesson_name(lesson)) + " lesson set");
            }
        }
        const auto options = std::make_shared<const std::vector<std::string>>(labels);
        std::vector<PlannedTrial> block;
        for (const auto* item : items) {
            for (int p = 0; p < kPlaysPerLessonStimulus; ++p) {
                block.push_back({item->id, item->spec.label, PhaseKind::Lesson, lesson_phase(k), false, 0, 0, options});
            }
        }
        rng.shuffle(std::span<PlannedTrial>(block));
        add_phase(std::move(block), k > 0);
    }

    const auto objects = corpus.of_lesson(stimuli::Lesson::Objects);
    for (const auto* item : objects) {
        if (std::find(plan.object_labels.begin(), plan.object_labels.end(), item->spec.label) ==
            plan.object_labels.end()) {
            plan.object_labels.push_back(item->spec.label);
        }
    }
    if (plan.object_labels.size() < 2) {
        throw InvalidArgument("session: corpus needs at least two object classes");
    }
    const auto object_options = std::make_shared<const std::vector<std::string>>(plan.object_labels);

    for (std::size_t c = 0; c < plan.object_labels.size(); ++c) {
        std::vector<const stimuli::CorpusItem*> train;
        for (const auto* item : objects) {
            if (item->spec.label == plan.object_labels[c] && item->split == stimuli::Split::Train) {
                train.push_back(item);
            }
        }
        if (train.empty()) {
            throw InvalidArgument("session: object class '" + plan.object_labels[c] + "' has no training images");
        }
        std::vector<PlannedTrial> block;
        const auto q = static_cast<std::size_t>(training_quota);
        for (std::size_t j = 0; j < q; ++j) {
            const auto* item = train[j * train.size() / q];
            block.push_back({item->id, item->spec.label, PhaseKind::AdvancedTraining, training_phase(c), false, 0, 0,
                             object_options});
        }
        // The first class follows the last lesson's rest.
        add_phase(std::move(block), c == 0);
    }

    std::vector<PlannedTrial> test;
    for (const auto* item : objects) {
        if (item->split == stimuli::Split::Test) {
            test.push_back({item->id, item->spec.label, PhaseKind::Testing, "testing", false, 0, 0, object_options});
        }
    }
    if (test.empty()) {
        throw InvalidArgument("session: corpus has no held-out object images for testing");
    }
    rng.shuffle(std::span<PlannedTrial>(test));
    add_phase(std::move(test), false);
    return plan;
}

} // namespace voicekit::session

#pragma once

#include <filesystem>
#include <ostream>
#include <string>
#include <vector>

#include "voicekit/assess/compare.hpp"
#include "voicekit/assess/evaluate.hpp"
#include "voicekit/assess/report_io.hpp"
#include "voicekit/codec/decoder.hpp"
#include "voicekit/codec/encoder.hpp"
#include "voicekit/codec/pgm.hpp"
#include "voicekit/dsp/wav.hpp"
#include "voicekit/service/config.hpp"
#include "voicekit/session/store.hpp"
#include "voicekit/stimuli/corpus.hpp"

namespace voicekit::service {

inline constexpr int kDefaultLessonSize = 64;
inline constexpr int kDefaultObjectSize = 32;
inline constexpr int kDefaultObjectClasses = 10;
inline constexpr int kDefaultPosesPerClass = 72;

// Returns the number of frames written.
inline std::size_t run_encode(const std::string& image_path, const std::string& scheme_spec,
                              const std::string& out_path)
{
    const auto image = read_pgm(image_path);
    const auto clip = encode(image, load_scheme(scheme_spec));
    dsp::wav_write(clip, out_path);
    return clip.samples.size();
}

inline GrayImage run_decode(const std::string& wav_path, const std::string& scheme_spec, int rows, int cols,
                            const std::string& out_path)
{
    const auto image = decode(dsp::wav_read(wav_path), load_scheme(scheme_spec), rows, cols);
    write_pgm(image, out_path);
    return image;
}

struct GenOptions {
    std::string kind = "objects"; // lessons | objects | all
    std::optional<int> size;      // default 64 for lessons, 32 for objects
    std::uint64_t seed = 0;
    int n_classes = kDefaultObjectClasses;
    int per_class = kDefaultPosesPerClass;
};

inline stimuli::StimulusCorpus generate_corpus(const GenOptions& o)
{
    const bool lessons = o.kind == "lessons" || o.kind == "all";
    const bool objects = o.kind == "objects" || o.kind == "all";
    if (!lessons && !objects) {
        throw InvalidArgument("--kind must be lessons, objects or all");
    }
    stimuli::StimulusCorpus corpus;
    corpus.seed = o.seed;
    if (lessons) {
        corpus = stimuli::merge_corpora(corpus, stimuli::gen_lesson_corpus(o.size.value_or(kDefaultLessonSize)));
    }
    if (objects) {
        corpus = stimuli::merge_corpora(
            corpus, stimuli::gen_object_corpus(o.n_classes, o.per_class, o.size.value_or(kDefaultObjectSize), o.seed));
    }
    return corpus;
}

// Writes the corpus and returns the manifest path.
inline std::string run_gen_stimuli(const GenOptions& o, const std::string& out_dir)
{
    return stimuli::write_corpus(generate_corpus(o), out_dir);
}

struct EvalOptions {
    assess::EvalParams params;
    std::size_t n_perm = 10000;
    std::uint64_t seed = 0;
};

// Object stimuli if the corpus has any, otherwise the whole corpus.
inline stimuli::StimulusCorpus evaluation_subset(const stimuli::StimulusCorpus& corpus)
{
    if (corpus.of_lesson(stimuli::Lesson::Objects).empty()) {
        return corpus;
    }
    stimuli::StimulusCorpus out;
    out.seed = corpus.seed;
    for (const auto& item : corpus.items) {
        if (item.spec.lesson == stimuli::Lesson::Objects) {
            out.items.push_back(item);
        }
    }
    return out;
}

inline assess::SchemeComparison evaluate_and_compare(const stimuli::StimulusCorpus& corpus,
                                                     const std::vector<EncodingScheme>& schemes,
                                                     const EvalOptions& o)
{
    require(schemes.size() >= 2, "eval: at least two schemes are required");
    const auto subset = evaluation_subset(corpus);
    std::vector<assess::SchemeEvaluation> evals;
    for (const auto& s : schemes) {
        evals.push_back(assess::evaluate_scheme(subset, s, o.params));
    }
    return assess::compare_schemes(evals, o.n_perm, o.seed);
}

// Writes <out> (key-value report) and <out>.csv; warns on `log` when the
// ranking disagrees with the expected direction.
inline assess::SchemeComparison run_eval(const std::string& manifest, const std::vector<std::string>& scheme_specs,
                                         const std::string& out, const EvalOptions& o, std::ostream& log)
{
    const auto corpus = stimuli::load_corpus(manifest);
    std::vector<EncodingScheme> schemes;
    for (const auto& spec : scheme_specs) {
        schemes.push_back(load_scheme(spec));
    }
    const auto cmp = evaluate_and_compare(corpus, schemes, o);
    const auto kv = assess::comparison_report(cmp);
    if (const auto dir = std::filesystem::path(out).parent_path(); !dir.empty()) {
        std::filesystem::create_directories(dir);
    }
    detail::write_file_atomic(out, kv.str());
    detail::write_file_atomic(out + ".csv", assess::comparison_csv(cmp));
    for (const char* check : {"check.tanh_ranks_first", "check.long_outranks_primary"}) {
        if (kv.has(check) && kv.get(check) == "no") {
            log << "WARNING: " << check << " = no (ranking: " << kv.get("ranking") << ")\n";
        }
    }
    return cmp;
}

inline session::SessionStore open_store(const ServiceConfig& cfg)
{
    require(!cfg.corpus.empty(), "config: 'corpus' is required");
    auto corpus = std::make_shared<const stimuli::StimulusCorpus>(stimuli::load_corpus(cfg.corpus));
    return session::SessionStore(cfg.data_dir, std::move(corpus), cfg.corpus);
}

// The persisted report if one exists, else finalize from the event log.
inline std::string run_report_session(const ServiceConfig& cfg, const std::string& id)
{
    const auto path = cfg.data_dir + "/reports/" + id + ".report";
    if (session::valid_session_id(id) && std::filesystem::exists(path)) {
        return detail::read_file(path);
    }
    auto store = open_store(cfg);
    return session::session_report_kv(store.report(id)).str();
}

inline std::string run_report_group(const ServiceConfig& cfg, const std::string& scheme)
{
    auto store = open_store(cfg);
    return session::group_report_kv(store.group(scheme)).str();
}

} // namespace voicekit::service

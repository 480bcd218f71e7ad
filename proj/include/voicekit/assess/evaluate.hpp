#pragma once

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "voicekit/assess/confusion.hpp"
#include "voicekit/assess/fidelity.hpp"
#include "voicekit/assess/inception.hpp"
#include "voicekit/assess/knn.hpp"
#include "voicekit/codec/decoder.hpp"
#include "voicekit/codec/encoder.hpp"
#include "voicekit/dsp/features.hpp"
#include "voicekit/stimuli/corpus.hpp"

namespace voicekit::assess {

struct EvalParams {
    dsp::FeatureParams features;
    std::size_t k = 5;
    double tau = 1.0;
    unsigned threads = 0; // 0: hardware concurrency
};

struct ItemOutcome {
    std::string id;
    std::string truth;
    std::string predicted;
    bool correct = false;
    std::vector<double> posterior;
    std::optional<Fidelity> fidelity; // nullopt when the geometry is undecodable
};

struct SchemeEvaluation {
    std::string scheme;
    std::vector<std::string> labels;
    ConfusionMatrix confusion{{}};
    MetricsReport metrics;
    double inception_score = 1.0;
    double mean_psnr_db = 0.0;      // over inexact reconstructions only
    double mean_pearson = 0.0;
    std::size_t n_exact = 0;        // pixel-identical reconstructions
    std::size_t n_fidelity = 0;     // items contributing to mean_pearson
    std::size_t n_undecodable = 0;  // items the decoder rejected
    std::size_t n_undefined_r = 0;  // decoded but constant reconstructions
    std::vector<ItemOutcome> items; // test split, corpus order

    std::vector<double> correctness() const
    {
        std::vector<double> v;
        v.reserve(items.size());
        for (const auto& it : items) {
            v.push_back(it.correct ? 1.0 : 0.0);
        }
        return v;
    }
};

namespace detail {

// Runs fn(i) for i in [0, n) on a few threads. Callers write results by index,
// so the outcome does not depend on scheduling.
template <typename Fn>
void parallel_for(std::size_t n, unsigned threads, Fn&& fn)
{
    if (threads == 0) {
        threads = std::max(1u, std::thread::hardware_concurrency());
    }
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(n, 1)));
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto worker = [&] {
        for (std::size_t i = next++; i < n; i = next++) {
            try {
                fn(i);
            } catch (...) {
                std::lock_guard lock(error_mutex);
                if (!error) {
                    error = std::current_exception();
                }
            }
        }
    };
    std::vector<std::thread> pool;
    for (unsigned t = 1; t < threads; ++t) {
        pool.emplace_back(worker);
    }
    worker();
    for (auto& t : pool) {
        t.join();
    }
    if (error) {
        std::rethrow_exception(error);
    }
}

} // namespace detail

// Encode every image, extract log-mel features, classify each test item against
// the training items with k-NN, and decode each test item for fidelity.
inline SchemeEvaluation evaluate_scheme(const stimuli::StimulusCorpus& corpus, const EncodingScheme& scheme,
                                        const EvalParams& params = {})
{
    validate(scheme);
    std::vector<std::string> labels;
    for (const auto& item : corpus.items) {
        if (std::find(labels.begin(), labels.end(), item.spec.label) == labels.end()) {
            labels.push_back(item.spec.label);
        }
    }
    auto label_index = [&](const std::string& l) {
        return static_cast<std::size_t>(std::find(labels.begin(), labels.end(), l) - labels.begin());
    };
    std::vector<std::size_t> train_idx;
    std::vector<std::size_t> test_idx;
    for (std::size_t i = 0; i < corpus.items.size(); ++i) {
        (corpus.items[i].split == stimuli::Split::Train ? train_idx : test_idx).push_back(i);
    }
    require(!train_idx.empty() && !test_idx.empty(), "evaluate_scheme: corpus needs both train and test items");

    const auto& fp = params.features;
    const dsp::MelFilterbank fb(fp.n_mels, fp.f_low, fp.f_high, fp.frame_len, scheme.sample_rate_hz);
    std::vector<std::vector<double>> features(corpus.items.size());
    std::vector<std::optional<Fidelity>> fidelity(corpus.items.size());
    std::vector<char> is_test(corpus.items.size(), 0);
    for (auto i : test_idx) {
        is_test[i] = 1;
    }

    detail::parallel_for(corpus.items.size(), params.threads, [&](std::size_t i) {
        const auto& item = corpus.items[i];
        const AudioClip clip = encode(item.image, scheme);
        auto fv = dsp::log_mel_features(clip, fb, fp.frame_len, fp.hop, fp.segments);
        features[i] = std::move(fv.values);
        if (is_test[i] && is_decodable(scheme, item.image.rows(), item.image.cols())) {
            fidelity[i] = reconstruction_fidelity(item.image, decode(clip, scheme, item.image.rows(), item.image.cols()));
        }
    });

    std::vector<LabeledFeature> train;
    train.reserve(train_idx.size());
    for (auto i : train_idx) {
        train.push_back({features[i], label_index(corpus.items[i].spec.label)});
    }

    SchemeEvaluation ev;
    ev.scheme = scheme.name;
    ev.labels = labels;
    ev.confusion = ConfusionMatrix(labels);
    ev.items.resize(test_idx.size());
    detail::parallel_for(test_idx.size(), params.threads, [&](std::size_t j) {
        const auto& item = corpus.items[test_idx[j]];
        auto& out = ev.items[j];
        out.id = item.id;
        out.truth = item.spec.label;
        out.posterior = knn_posterior(train, features[test_idx[j]], labels.size(), std::min(params.k, train.size()),
                                      params.tau);
        out.predicted = labels[argmax(out.posterior)];
        out.correct = out.predicted == out.truth;
        out.fidelity = fidelity[test_idx[j]];
    });

    std::vector<std::vector<double>> posteriors;
    double psnr_sum = 0.0;
    double r_sum = 0.0;
    std::size_t n_psnr = 0;
    for (const auto& out : ev.items) {
        ev.confusion.add(out.truth, out.predicted);
        posteriors.push_back(out.posterior);
        if (!out.fidelity) {
            ++ev.n_undecodable;
            continue;
        }
        if (out.fidelity->exact) {
            ++ev.n_exact;
        } else {
            psnr_sum += out.fidelity->psnr_db;
            ++n_psnr;
        }
        if (out.fidelity->pearson_r) {
            r_sum += *out.fidelity->pearson_r;
            ++ev.n_fidelity;
        } else {
            ++ev.n_undefined_r;
        }
    }
    ev.metrics = prf(ev.confusion);
    ev.inception_score = inception_score(posteriors);
    ev.mean_psnr_db = n_psnr > 0 ? psnr_sum / static_cast<double>(n_psnr) : std::nan("");
    ev.mean_pearson = ev.n_fidelity > 0 ? r_sum / static_cast<double>(ev.n_fidelity) : std::nan("");
    return ev;
}

} // namespace voicekit::assess

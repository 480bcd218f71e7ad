#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "voicekit/assess/evaluate.hpp"
#include "voicekit/assess/stats.hpp"

namespace voicekit::assess {

struct PairwiseTest {
    std::string scheme_a;
    std::string scheme_b;
    double delta_accuracy = 0.0; // mean correctness of a minus b
    double p_raw = 1.0;
    double p_adjusted = 1.0; // Bonferroni over all pairs
};

struct SchemeSummary {
    std::string scheme;
    MetricsReport metrics;
    double inception_score = 1.0;
    double mean_psnr_db = 0.0;
    double mean_pearson = 0.0;
    std::size_t n_exact = 0;
    std::size_t n_fidelity = 0;
    std::size_t n_undecodable = 0;
};

struct SchemeComparison {
    std::vector<SchemeSummary> schemes; // input order
    std::vector<PairwiseTest> pairs;
    std::vector<std::string> ranking; // best macro F1 first, ties by name

    const SchemeSummary& summary(const std::string& name) const
    {
        for (const auto& s : schemes) {
            if (s.scheme == name) {
                return s;
            }
        }
        throw NotFound("no scheme named '" + name + "' in comparison");
    }
};

inline SchemeSummary summarize(const SchemeEvaluation& ev)
{
    return {ev.scheme, ev.metrics, ev.inception_score, ev.mean_psnr_db, ev.mean_pearson, ev.n_exact, ev.n_fidelity, ev.n_undecodable};
}

inline SchemeComparison compare_schemes(const std::vector<SchemeEvaluation>& evaluations, std::size_t n_perm,
                                        std::uint64_t seed)
{
    require(evaluations.size() >= 2, "compare_schemes: need at least two schemes");
    const auto& reference = evaluations.front();
    for (const auto& ev : evaluations) {
        bool same = ev.items.size() == reference.items.size();
        for (std::size_t i = 0; same && i < ev.items.size(); ++i) {
            same = ev.items[i].id == reference.items[i].id;
        }
        if (!same) {
            throw InvalidArgument("compare_schemes: scheme '" + ev.scheme + "' was evaluated on a different test split");
        }
    }

    SchemeComparison cmp;
    for (const auto& ev : evaluations) {
        cmp.schemes.push_back(summarize(ev));
    }

    std::vector<std::size_t> order(evaluations.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        const double fa = evaluations[a].metrics.macro_f1;
        const double fb = evaluations[b].metrics.macro_f1;
        if (fa != fb) {
            return fa > fb;
        }
        return evaluations[a].scheme < evaluations[b].scheme;
    });
    for (auto i : order) {
        cmp.ranking.push_back(evaluations[i].scheme);
    }

    const std::size_t n_pairs = evaluations.size() * (evaluations.size() - 1) / 2;
    for (std::size_t a = 0; a < evaluations.size(); ++a) {
        for (std::size_t b = a + 1; b < evaluations.size(); ++b) {
            const auto ca = evaluations[a].correctness();
            const auto cb = evaluations[b].correctness();
            PairwiseTest t;
            t.scheme_a = evaluations[a].scheme;
            t.scheme_b = evaluations[b].scheme;
            t.delta_accuracy = mean(ca) - mean(cb);
            t.p_raw = permutation_test(ca, cb, n_perm, seed);
            t.p_adjusted = bonferroni(t.p_raw, n_pairs);
            cmp.pairs.push_back(t);
        }
    }
    return cmp;
}

struct ExternalCorrelation {
    std::string metric;
    std::optional<double> r; // nullopt when a vector is constant
};

// Pearson r between an external per-scheme metric (e.g. human F1, in the
// comparison's scheme order) and each machine metric.
inline std::vector<ExternalCorrelation> correlate_with_external(const SchemeComparison& cmp,
                                                                std::span<const double> external)
{
    require(external.size() == cmp.schemes.size(), "correlate_with_external: one value per scheme required");
    auto column = [&](auto getter) {
        std::vector<double> v;
        for (const auto& s : cmp.schemes) {
            v.push_back(getter(s));
        }
        return v;
    };
    const std::vector<std::pair<std::string, std::vector<double>>> machine = {
        {"macro_precision", column([](const SchemeSummary& s) { return s.metrics.macro_precision; })},
        {"macro_recall", column([](const SchemeSummary& s) { return s.metrics.macro_recall; })},
        {"macro_f1", column([](const SchemeSummary& s) { return s.metrics.macro_f1; })},
        {"inception_score", column([](const SchemeSummary& s) { return s.inception_score; })},
        {"mean_pearson", column([](const SchemeSummary& s) { return s.mean_pearson; })},
    };
    std::vector<ExternalCorrelation> out;
    for (const auto& [name, values] : machine) {
        const bool finite = std::all_of(values.begin(), values.end(), [](double v) { return std::isfinite(v); });
        out.push_back({name, finite ? pearson(values, external) : std::nullopt});
    }
    return out;
}

} // namespace voicekit::assess

#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

#include "voicekit/error.hpp"

namespace voicekit::assess {

struct LabeledFeature {
    std::span<const double> values;
    std::size_t label = 0;
};

inline double euclidean(std::span<const double> a, std::span<const double> b)
{
    require(a.size() == b.size(), "feature vectors differ in length");
    double sum = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        sum += d * d;
    }
    return std::sqrt(sum);
}

// Class posterior from the k nearest training points: each class present in the
// neighbourhood scores exp(-mean distance / tau), absent classes score 0, and
// the scores are normalised. Ties in distance go to the lower training index.
inline std::vector<double> knn_posterior(std::span<const LabeledFeature> train, std::span<const double> query,
                                         std::size_t n_classes, std::size_t k, double tau)
{
    require(!train.empty(), "knn: empty training set");
    require(k >= 1, "knn: k must be >= 1");
    require(k <= train.size(), "knn: k exceeds training set size");
    require(n_classes >= 2, "knn: need at least two classes");
    require(tau > 0.0, "knn: temperature must be > 0");

    std::vector<std::pair<double, std::size_t>> dist(train.size());
    for (std::size_t i = 0; i < train.size(); ++i) {
        require(train[i].label < n_classes, "knn: training label out of range");
        dist[i] = {euclidean(train[i].values, query), i};
    }
    std::partial_sort(dist.begin(), dist.begin() + static_cast<std::ptrdiff_t>(k), dist.end());

    std::vector<double> sum(n_classes, 0.0);
    std::vector<std::size_t> members(n_classes, 0);
    for (std::size_t j = 0; j < k; ++j) {
        const auto label = train[dist[j].second].label;
        sum[label] += dist[j].first;
        ++members[label];
    }
    // Shift by the smallest class mean before exponentiating; the ratio is unchanged.
    double best = INFINITY;
    for (std::size_t c = 0; c < n_classes; ++c) {
        if (members[c] > 0) {
            best = std::min(best, sum[c] / static_cast<double>(members[c]));
        }
    }
    std::vector<double> p(n_classes, 0.0);
    double total = 0.0;
    for (std::size_t c = 0; c < n_classes; ++c) {
        if (members[c] > 0) {
            p[c] = std::exp(-(sum[c] / static_cast<double>(members[c]) - best) / tau);
            total += p[c];
        }
    }
    for (auto& v : p) {
        v /= total;
    }
    return p;
}

// Index of the most probable class, lowest index on ties.
inline std::size_t argmax(std::span<const double> p)
{
    return static_cast<std::size_t>(std::max_element(p.begin(), p.end()) - p.begin());
}

} // namespace voicekit::assess

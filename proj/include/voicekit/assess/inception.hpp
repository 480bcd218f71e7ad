#pragma once

#include <cmath>
#include <vector>

#include "voicekit/error.hpp"

namespace voicekit::assess {

// exp(mean_x KL(p(y|x) || p(y))), with p(y) the mean posterior and 0 log 0 = 0.
inline double inception_score(const std::vector<std::vector<double>>& posteriors)
{
    require(!posteriors.empty(), "inception_score: no posteriors");
    const std::size_t n_classes = posteriors.front().size();
    // Marginal accumulated as offsets from the first posterior, so identical
    // posteriors give a marginal exactly equal to them.
    const auto& first = posteriors.front();
    std::vector<double> marginal(n_classes, 0.0);
    for (const auto& p : posteriors) {
        require(p.size() == n_classes, "inception_score: posteriors differ in length");
        double total = 0.0;
        for (double v : p) {
            require(v >= 0.0, "inception_score: negative probability");
            total += v;
        }
        require(std::abs(total - 1.0) <= 1e-9, "inception_score: posterior does not sum to 1");
        for (std::size_t c = 0; c < n_classes; ++c) {
            marginal[c] += p[c] - first[c];
        }
    }
    const auto n = static_cast<double>(posteriors.size());
    for (std::size_t c = 0; c < n_classes; ++c) {
        marginal[c] = first[c] + marginal[c] / n;
    }
    double kl_sum = 0.0;
    for (const auto& p : posteriors) {
        for (std::size_t c = 0; c < n_classes; ++c) {
            if (p[c] > 0.0) {
                kl_sum += p[c] * std::log(p[c] / marginal[c]);
            }
        }
    }
    return std::exp(kl_sum / n);
}

} // namespace voicekit::assess

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "voicekit/detail/rng.hpp"
#include "voicekit/error.hpp"

namespace voicekit::assess {

// Sample Pearson correlation; nullopt when either sequence has zero variance.
inline std::optional<double> pearson(std::span<const double> x, std::span<const double> y)
{
    require(x.size() == y.size(), "pearson: sequences differ in length");
    require(x.size() >= 2, "pearson: need at least two points");
    const auto n = static_cast<double>(x.size());
    double mx = 0.0;
    double my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxy = 0.0;
    double sxx = 0.0;
    double syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double dx = x[i] - mx;
        const double dy = y[i] - my;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if (sxx == 0.0 || syy == 0.0) {
        return std::nullopt;
    }
    return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

inline double mean(std::span<const double> v)
{
    double s = 0.0;
    for (double x : v) {
        s += x;
    }
    return v.empty() ? 0.0 : s / static_cast<double>(v.size());
}

// Two-sided label-permutation test on |mean(a) - mean(b)|:
//   p = (1 + #{permuted statistic >= observed}) / (1 + n_perm).
// The permutations act on the sorted pooled sample and always split off the
// smaller group size, so the result does not depend on which group is passed first.
inline double permutation_test(std::span<const double> group_a, std::span<const double> group_b, std::size_t n_perm,
                               std::uint64_t seed)
{
    require(!group_a.empty() && !group_b.empty(), "permutation_test: both groups must be nonempty");
    require(n_perm >= 1, "permutation_test: n_perm must be >= 1");

    const double observed = std::abs(mean(group_a) - mean(group_b));
    std::vector<double> pooled(group_a.begin(), group_a.end());
    pooled.insert(pooled.end(), group_b.begin(), group_b.end());
    std::sort(pooled.begin(), pooled.end());
    const std::size_t m = std::min(group_a.size(), group_b.size());
    const std::size_t rest = pooled.size() - m;
    // Floating sums of the same values in another order can differ in the last bits.
    const double tolerance = 1e-12 * std::max(1.0, observed);

    voicekit::detail::Rng rng(seed);
    std::size_t extreme = 0;
    for (std::size_t p = 0; p < n_perm; ++p) {
        rng.shuffle(std::span<double>(pooled));
        double head = 0.0;
        double tail = 0.0;
        for (std::size_t i = 0; i < pooled.size(); ++i) {
            (i < m ? head : tail) += pooled[i];
        }
        const double stat = std::abs(head / static_cast<double>(m) - tail / static_cast<double>(rest));
        if (stat >= observed - tolerance) {
            ++extreme;
        }
    }
    return static_cast<double>(1 + extreme) / static_cast<double>(1 + n_perm);
}

inline double bonferroni(double p, std::size_t comparisons)
{
    require(p >= 0.0 && p <= 1.0, "bonferroni: p outside [0, 1]");
    require(comparisons >= 1, "bonferroni: need at least one comparison");
    return std::min(1.0, p * static_cast<double>(comparisons));
}

struct MeanSd {
    double mean = 0.0;
    double sd = 0.0; // sample standard deviation, 0 for a single value
    std::size_t n = 0;
};

inline MeanSd mean_sd(std::span<const double> v)
{
    MeanSd out;
    out.n = v.size();
    if (v.empty()) {
        return out;
    }
    out.mean = mean(v);
    if (v.size() > 1) {
        double ss = 0.0;
        for (double x : v) {
            ss += (x - out.mean) * (x - out.mean);
        }
        out.sd = std::sqrt(ss / static_cast<double>(v.size() - 1));
    }
    return out;
}

} // namespace voicekit::assess

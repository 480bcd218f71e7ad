#pragma once

#include <cmath>
#include <optional>
#include <vector>

#include "voicekit/assess/stats.hpp"
#include "voicekit/codec/gray_image.hpp"

namespace voicekit::assess {

struct Fidelity {
    double psnr_db = INFINITY; // +inf when exact
    bool exact = false;
    std::optional<double> pearson_r; // nullopt when either image is constant
};

inline Fidelity reconstruction_fidelity(const GrayImage& original, const GrayImage& reconstructed)
{
    require(original.rows() == reconstructed.rows() && original.cols() == reconstructed.cols(),
            "reconstruction_fidelity: image dimensions differ");
    const auto a = original.pixels();
    const auto b = reconstructed.pixels();
    std::vector<double> x(a.begin(), a.end());
    std::vector<double> y(b.begin(), b.end());
    double sse = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sse += (x[i] - y[i]) * (x[i] - y[i]);
    }
    Fidelity f;
    if (sse == 0.0) {
        f.exact = true;
    } else {
        const double mse = sse / static_cast<double>(x.size());
        f.psnr_db = 10.0 * std::log10(255.0 * 255.0 / mse);
    }
    f.pearson_r = pearson(x, y);
    return f;
}

} // namespace voicekit::assess

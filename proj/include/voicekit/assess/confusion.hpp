#pragma once

#include <string>
#include <vector>

#include "voicekit/error.hpp"

namespace voicekit::assess {

// Rows are the true class, columns the predicted class.
struct ConfusionMatrix {
    std::vector<std::string> labels;
    std::vector<std::vector<std::size_t>> counts;

    explicit ConfusionMatrix(std::vector<std::string> labels_)
        : labels(std::move(labels_)), counts(labels.size(), std::vector<std::size_t>(labels.size(), 0))
    {
    }

    ConfusionMatrix(std::vector<std::string> labels_, std::vector<std::vector<std::size_t>> counts_)
        : labels(std::move(labels_)), counts(std::move(counts_))
    {
        require(counts.size() == labels.size(), "confusion matrix: one row per label required");
        for (const auto& row : counts) {
            require(row.size() == labels.size(), "confusion matrix must be square");
        }
    }

    std::size_t size() const { return labels.size(); }

    std::size_t index_of(const std::string& label) const
    {
        for (std::size_t i = 0; i < labels.size(); ++i) {
            if (labels[i] == label) {
                return i;
            }
        }
        throw InvalidArgument("confusion matrix: unknown label '" + label + "'");
    }

    void add(std::size_t truth, std::size_t predicted) { ++counts.at(truth).at(predicted); }
    void add(const std::string& truth, const std::string& predicted) { add(index_of(truth), index_of(predicted)); }

    std::size_t total() const
    {
        std::size_t n = 0;
        for (const auto& row : counts) {
            for (auto v : row) {
                n += v;
            }
        }
        return n;
    }
};

struct ClassMetrics {
    std::string label;
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
};

struct MetricsReport {
    std::vector<ClassMetrics> per_class;
    double macro_precision = 0.0;
    double macro_recall = 0.0;
    double macro_f1 = 0.0;
    std::size_t n_items = 0;
};

// Per-class precision/recall/F1 with 0 for empty denominators; macro = unweighted mean.
inline MetricsReport prf(const ConfusionMatrix& cm)
{
    MetricsReport report;
    report.n_items = cm.total();
    const std::size_t n = cm.size();
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t row = 0;
        std::size_t col = 0;
        for (std::size_t j = 0; j < n; ++j) {
            row += cm.counts[c][j];
            col += cm.counts[j][c];
        }
        const auto hit = static_cast<double>(cm.counts[c][c]);
        ClassMetrics m{cm.labels[c]};
        m.precision = col == 0 ? 0.0 : hit / static_cast<double>(col);
        m.recall = row == 0 ? 0.0 : hit / static_cast<double>(row);
        m.f1 = (m.precision + m.recall) == 0.0 ? 0.0 : 2.0 * m.precision * m.recall / (m.precision + m.recall);
        report.macro_precision += m.precision;
        report.macro_recall += m.recall;
        report.macro_f1 += m.f1;
        report.per_class.push_back(m);
    }
    if (n > 0) {
        report.macro_precision /= static_cast<double>(n);
        report.macro_recall /= static_cast<double>(n);
        report.macro_f1 /= static_cast<double>(n);
    }
    return report;
}

} // namespace voicekit::assess

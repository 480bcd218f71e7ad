#pragma once

#include <string>

#include "voicekit/assess/compare.hpp"
#include "voicekit/assess/confusion.hpp"
#include "voicekit/detail/kv.hpp"

namespace voicekit::assess {

// Report documents are key-value text (see detail::KeyValues). Keys:
//   <prefix>.n_items, <prefix>.macro_precision|macro_recall|macro_f1,
//   <prefix>.class.<label>.precision|recall|f1
inline void put_metrics(voicekit::detail::KeyValues& kv, const std::string& prefix, const MetricsReport& m)
{
    kv.set(prefix + ".n_items", m.n_items);
    kv.set(prefix + ".macro_precision", m.macro_precision);
    kv.set(prefix + ".macro_recall", m.macro_recall);
    kv.set(prefix + ".macro_f1", m.macro_f1);
    for (const auto& c : m.per_class) {
        kv.set(prefix + ".class." + c.label + ".precision", c.precision);
        kv.set(prefix + ".class." + c.label + ".recall", c.recall);
        kv.set(prefix + ".class." + c.label + ".f1", c.f1);
    }
}

// <prefix>.labels = a,b,c ; <prefix>.row.<truth> = counts in label order
inline void put_confusion(voicekit::detail::KeyValues& kv, const std::string& prefix, const ConfusionMatrix& cm)
{
    std::string labels;
    for (const auto& l : cm.labels) {
        labels += (labels.empty() ? "" : ",") + l;
    }
    kv.set(prefix + ".labels", labels);
    for (std::size_t i = 0; i < cm.size(); ++i) {
        std::string row;
        for (std::size_t j = 0; j < cm.size(); ++j) {
            row += (j == 0 ? "" : ",") + std::to_string(cm.counts[i][j]);
        }
        kv.set(prefix + ".row." + cm.labels[i], row);
    }
}

inline MetricsReport get_metrics(const voicekit::detail::KeyValues& kv, const std::string& prefix,
                                 const std::vector<std::string>& labels)
{
    MetricsReport m;
    m.n_items = static_cast<std::size_t>(kv.get_int(prefix + ".n_items"));
    m.macro_precision = kv.get_double(prefix + ".macro_precision");
    m.macro_recall = kv.get_double(prefix + ".macro_recall");
    m.macro_f1 = kv.get_double(prefix + ".macro_f1");
    for (const auto& l : labels) {
        m.per_class.push_back({l, kv.get_double(prefix + ".class." + l + ".precision"),
                               kv.get_double(prefix + ".class." + l + ".recall"),
                               kv.get_double(prefix + ".class." + l + ".f1")});
    }
    return m;
}

inline std::string yes_no(bool b) { return b ? "yes" : "no"; }

// Whole comparison as a key-value report. The two directional checks compare
// against the expected ordering (tanh map first, longer scan above primary).
inline voicekit::detail::KeyValues comparison_report(const SchemeComparison& cmp)
{
    voicekit::detail::KeyValues kv;
    std::string names;
    for (const auto& s : cmp.schemes) {
        names += (names.empty() ? "" : ",") + s.scheme;
    }
    kv.set("schemes", names);
    for (std::size_t i = 0; i < cmp.schemes.size(); ++i) {
        const auto& s = cmp.schemes[i];
        const std::string p = "scheme." + std::to_string(i);
        kv.set(p + ".name", s.scheme);
        put_metrics(kv, p, s.metrics);
        kv.set(p + ".inception_score", s.inception_score);
        kv.set(p + ".mean_psnr_db", s.mean_psnr_db);
        kv.set(p + ".mean_pearson", s.mean_pearson);
        kv.set(p + ".n_exact", s.n_exact);
        kv.set(p + ".n_fidelity", s.n_fidelity);
        kv.set(p + ".n_undecodable", s.n_undecodable);
    }
    std::string ranking;
    for (const auto& r : cmp.ranking) {
        ranking += (ranking.empty() ? "" : ",") + r;
    }
    kv.set("ranking", ranking);
    for (std::size_t i = 0; i < cmp.pairs.size(); ++i) {
        const auto& t = cmp.pairs[i];
        const std::string p = "pair." + std::to_string(i);
        kv.set(p + ".a", t.scheme_a);
        kv.set(p + ".b", t.scheme_b);
        kv.set(p + ".delta_accuracy", t.delta_accuracy);
        kv.set(p + ".p_raw", t.p_raw);
        kv.set(p + ".p_bonferroni", t.p_adjusted);
    }
    auto rank_of = [&](const std::string& name) -> std::optional<std::size_t> {
        for (std::size_t i = 0; i < cmp.ranking.size(); ++i) {
            if (cmp.ranking[i] == name) {
                return i;
            }
        }
        return std::nullopt;
    };
    const auto tanh_rank = rank_of("TANH");
    const auto long_rank = rank_of("LONG");
    const auto primary_rank = rank_of("PRIMARY");
    if (tanh_rank) {
        kv.set("check.tanh_ranks_first", yes_no(*tanh_rank == 0));
    }
    if (long_rank && primary_rank) {
        kv.set("check.long_outranks_primary", yes_no(*long_rank < *primary_rank));
    }
    return kv;
}

// One row per scheme.
inline std::string comparison_csv(const SchemeComparison& cmp)
{
    using voicekit::detail::format_double;
    std::string out =
        "scheme,macro_precision,macro_recall,macro_f1,inception_score,mean_psnr_db,mean_pearson,n_items,n_exact,n_fidelity,"
        "n_undecodable\n";
    for (const auto& s : cmp.schemes) {
        out += s.scheme + "," + format_double(s.metrics.macro_precision) + "," + format_double(s.metrics.macro_recall) +
               "," + format_double(s.metrics.macro_f1) + "," + format_double(s.inception_score) + "," +
               format_double(s.mean_psnr_db) + "," + format_double(s.mean_pearson) + "," +
               std::to_string(s.metrics.n_items) + "," + std::to_string(s.n_exact) + "," + std::to_string(s.n_fidelity) + "," +
               std::to_string(s.n_undecodable) + "\n";
    }
    return out;
}

} // namespace voicekit::assess

#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "voicekit/assess/report_io.hpp"
#include "voicekit/assess/stats.hpp"
#include "voicekit/session/session.hpp"

namespace voicekit::session {

inline bool valid_session_id(std::string_view id)
{
    if (id.empty() || id.size() > 64) {
        return false;
    }
    return std::all_of(id.begin(), id.end(), [](char c) {
        return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_' || c == '-';
    });
}

// Report schema: session_id, scheme, then confusion.* and metrics.* as written by
// assess::put_confusion / assess::put_metrics.
inline detail::KeyValues session_report_kv(const SessionReport& r)
{
    detail::KeyValues kv;
    kv.set("session_id", r.session_id);
    kv.set("scheme", r.scheme);
    assess::put_confusion(kv, "confusion", r.confusion);
    assess::put_metrics(kv, "metrics", r.metrics);
    return kv;
}

inline SessionReport parse_session_report(const detail::KeyValues& kv)
{
    SessionReport r;
    r.session_id = kv.get("session_id");
    r.scheme = kv.get("scheme");
    const auto labels = detail::split(kv.get("confusion.labels"), ',');
    std::vector<std::vector<std::size_t>> counts;
    for (const auto& l : labels) {
        std::vector<std::size_t> row;
        for (const auto& v : detail::split(kv.get("confusion.row." + l), ',')) {
            row.push_back(static_cast<std::size_t>(detail::parse_int(v, "confusion count")));
        }
        counts.push_back(std::move(row));
    }
    r.confusion = assess::ConfusionMatrix(labels, std::move(counts));
    r.metrics = assess::get_metrics(kv, "metrics", labels);
    return r;
}

struct GroupSummary {
    std::string scheme;
    std::vector<std::string> session_ids;
    assess::MeanSd precision;
    assess::MeanSd recall;
    assess::MeanSd f1;
};

inline GroupSummary aggregate_group(const std::string& scheme, std::span<const SessionReport> reports)
{
    GroupSummary g;
    g.scheme = scheme;
    std::vector<double> p, r, f;
    for (const auto& rep : reports) {
        require(rep.scheme == scheme, "group report mixes schemes");
        g.session_ids.push_back(rep.session_id);
        p.push_back(rep.metrics.macro_precision);
        r.push_back(rep.metrics.macro_recall);
        f.push_back(rep.metrics.macro_f1);
    }
    if (reports.empty()) {
        throw NotFound("no completed sessions for scheme '" + scheme + "'");
    }
    g.precision = assess::mean_sd(p);
    g.recall = assess::mean_sd(r);
    g.f1 = assess::mean_sd(f);
    return g;
}

inline detail::KeyValues group_report_kv(const GroupSummary& g)
{
    detail::KeyValues kv;
    kv.set("scheme", g.scheme);
    kv.set("n_sessions", g.session_ids.size());
    std::string ids;
    for (const auto& id : g.session_ids) {
        ids += (ids.empty() ? "" : ",") + id;
    }
    kv.set("sessions", ids);
    auto put = [&](const std::string& name, const assess::MeanSd& m) {
        kv.set(name + ".mean", m.mean);
        kv.set(name + ".sd", m.sd);
    };
    put("macro_precision", g.precision);
    put("macro_recall", g.recall);
    put("macro_f1", g.f1);
    return kv;
}

// Sessions under <data_dir>/sessions/<id>.log, reports under <data_dir>/reports/<id>.report.
// Commands on one session are serialized; different sessions proceed in parallel.
class SessionStore {
public:
    SessionStore(std::string data_dir, std::shared_ptr<const stimuli::StimulusCorpus> corpus, std::string corpus_ref,
                 Clock clock = system_clock_ms)
        : dir_(std::move(data_dir)), corpus_(std::move(corpus)), corpus_ref_(std::move(corpus_ref)),
          clock_(std::move(clock))
    {
        require(corpus_ != nullptr, "session store: no corpus");
        std::filesystem::create_directories(sessions_dir());
        std::filesystem::create_directories(reports_dir());
    }

    std::string create(const EncodingScheme& scheme, std::optional<std::uint64_t> seed,
                       int training_quota = kDefaultTrainingQuota)
    {
        std::string id;
        std::shared_ptr<Slot> slot;
        {
            std::lock_guard lock(mutex_);
            do {
                id = fresh_id();
            } while (slots_.count(id) != 0 || std::filesystem::exists(log_path(id)));
            slot = std::make_shared<Slot>();
            slots_[id] = slot;
        }
        std::lock_guard lock(slot->mutex);
        SessionOptions options{seed ? *seed : random_u64(), training_quota, corpus_ref_};
        try {
            slot->session = Session::create(id, scheme, corpus_, options, std::make_shared<FileLog>(log_path(id)),
                                            clock_);
        } catch (...) {
            std::error_code ec;
            std::filesystem::remove(log_path(id), ec);
            std::lock_guard map_lock(mutex_);
            slots_.erase(id);
            throw;
        }
        return id;
    }

    template <class F>
    decltype(auto) with_session(const std::string& id, F&& fn)
    {
        auto slot = slot_for(id);
        std::lock_guard lock(slot->mutex);
        if (!slot->session) {
            slot->session = load(id);
        }
        return std::forward<F>(fn)(*slot->session);
    }

    // Finalizes the session and persists its report.
    SessionReport report(const std::string& id)
    {
        return with_session(id, [&](Session& s) {
            auto r = s.finalize();
            detail::write_file_atomic(report_path(id), session_report_kv(r).str());
            return r;
        });
    }

    std::vector<std::string> session_ids() const
    {
        std::vector<std::string> out;
        for (const auto& entry : std::filesystem::directory_iterator(sessions_dir())) {
            if (entry.path().extension() == ".log") {
                out.push_back(entry.path().stem().string());
            }
        }
        std::sort(out.begin(), out.end());
        return out;
    }

    // Mean and sd over every completed session run under `scheme`.
    GroupSummary group(const std::string& scheme)
    {
        std::vector<SessionReport> reports;
        for (const auto& id : session_ids()) {
            auto done = with_session(id, [&](Session& s) { return s.complete() && s.scheme().name == scheme; });
            if (done) {
                reports.push_back(report(id));
            }
        }
        return aggregate_group(scheme, reports);
    }

    std::string log_path(const std::string& id) const { return sessions_dir() + "/" + id + ".log"; }
    std::string report_path(const std::string& id) const { return reports_dir() + "/" + id + ".report"; }
    const std::string& data_dir() const { return dir_; }

private:
    struct Slot {
        std::mutex mutex;
        std::optional<Session> session;
    };

    std::string sessions_dir() const { return dir_ + "/sessions"; }
    std::string reports_dir() const { return dir_ + "/reports"; }

    std::shared_ptr<Slot> slot_for(const std::string& id)
    {
        if (!valid_session_id(id)) {
            throw NotFound("no session '" + id + "'");
        }
        std::lock_guard lock(mutex_);
        auto& slot = slots_[id];
        if (!slot) {
            slot = std::make_shared<Slot>();
        }
        return slot;
    }

    Session load(const std::string& id)
    {
        const auto path = log_path(id);
        if (!std::filesystem::exists(path)) {
            throw NotFound("no session '" + id + "'");
        }
        truncate_partial_tail(path);
        const auto events = read_event_log(path);
        return Session::replay(events, corpus_, std::make_shared<FileLog>(path), clock_);
    }

    std::uint64_t random_u64()
    {
        std::lock_guard lock(rd_mutex_);
        return (static_cast<std::uint64_t>(rd_()) << 32) ^ rd_();
    }

    std::string fresh_id()
    {
        char buf[20];
        std::snprintf(buf, sizeof buf, "s%012llx", static_cast<unsigned long long>(random_u64() & 0xffffffffffffULL));
        return buf;
    }

    std::string dir_;
    std::shared_ptr<const stimuli::StimulusCorpus> corpus_;
    std::string corpus_ref_;
    Clock clock_;
    std::mutex mutex_;
    std::map<std::string, std::shared_ptr<Slot>> slots_;
    std::mutex rd_mutex_;
    std::random_device rd_;
};

} // namespace voicekit::session

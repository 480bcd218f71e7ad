#pragma once

#include <chrono>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "voicekit/assess/confusion.hpp"
#include "voicekit/codec/scheme.hpp"
#include "voicekit/session/events.hpp"
#include "voicekit/session/log.hpp"
#include "voicekit/session/plan.hpp"

namespace voicekit::session {

using Clock = std::function<std::int64_t()>;

inline std::int64_t system_clock_ms()
{
    return std::chrono::duration_cast<std::chrono::milliseconds>(
               std::chrono::system_clock::now().time_since_epoch())
        .count();
}

// Identifies corpus content (manifest and pixels) so a log is never replayed
// against a different corpus.
inline std::string corpus_fingerprint(const stimuli::StimulusCorpus& corpus)
{
    std::string bytes = stimuli::manifest_csv(corpus);
    for (const auto& item : corpus.items) {
        bytes.append(reinterpret_cast<const char*>(item.image.pixels().data()), item.image.pixels().size());
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(detail::fnv1a(bytes)));
    return buf;
}

struct SessionOptions {
    std::uint64_t seed = 0;
    int training_quota = kDefaultTrainingQuota;
    std::string corpus_ref;
};

struct AnswerRecord {
    std::int64_t timestamp_ms = 0;
    std::string phase;
    std::string stimulus_id;
    std::string truth_label;
    std::optional<std::string> given_label;
    bool feedback_shown = false;
};

struct StimulusPrompt {
    std::string stimulus_id;
    std::string phase;
    bool expects_answer = false;
    bool reveal_after = false;
    bool rest_before = false;
    std::vector<std::string> options;
    std::size_t phase_done = 0;   // plays completed in this phase
    std::size_t phase_total = 0;
};

// Training answers reveal the truth (and correctness if a label was given);
// testing answers are acknowledged only.
struct Feedback {
    std::optional<std::string> truth;
    std::optional<bool> correct;
};

struct SessionReport {
    std::string session_id;
    std::string scheme;
    assess::ConfusionMatrix confusion{std::vector<std::string>{}};
    assess::MetricsReport metrics;
};

class Session {
public:
    static Session create(std::string session_id, const EncodingScheme& scheme,
                          std::shared_ptr<const stimuli::StimulusCorpus> corpus, const SessionOptions& options,
                          std::shared_ptr<EventLog> log, Clock clock = system_clock_ms)
    {
        require(!session_id.empty(), "session: empty session id");
        voicekit::validate(scheme);
        Session s(std::move(corpus), std::move(log), std::move(clock));
        Event e;
        e.kind = EventKind::Created;
        e.session_id = std::move(session_id);
        e.scheme = scheme.name;
        e.scheme_text = serialize_scheme(scheme);
        e.corpus_ref = options.corpus_ref;
        e.corpus_hash = corpus_fingerprint(*s.corpus_);
        e.seed = options.seed;
        e.training_quota = options.training_quota;
        s.init(e);
        s.emit(std::move(e));
        return s;
    }

    // Rebuilds the state from a log prefix. Later commands append to `log`.
    static Session replay(std::span<const Event> events, std::shared_ptr<const stimuli::StimulusCorpus> corpus,
                          std::shared_ptr<EventLog> log, Clock clock = system_clock_ms)
    {
        if (events.empty() || events.front().kind != EventKind::Created) {
            throw FormatError("event log must begin with a created event");
        }
        Session s(std::move(corpus), std::move(log), std::move(clock));
        if (corpus_fingerprint(*s.corpus_) != events.front().corpus_hash) {
            throw StateError("session " + events.front().session_id + " was created against a different corpus");
        }
        s.init(events.front());
        for (const auto& e : events) {
            s.apply(e);
        }
        return s;
    }

    StimulusPrompt next_stimulus()
    {
        if (complete()) {
            throw StateError("session " + id_ + " is complete");
        }
        if (!pending_) {
            const auto& t = plan_.trials[cursor_];
            if (t.rest_before && !rest_logged_) {
                emit_rest();
            }
            Event e;
            e.kind = EventKind::Presented;
            e.phase = t.phase;
            e.stimulus_id = t.stimulus_id;
            emit(std::move(e));
        }
        return prompt();
    }

    Feedback submit_answer(const std::string& stimulus_id, const std::optional<std::string>& label)
    {
        if (complete()) {
            throw StateError("session " + id_ + " is complete");
        }
        if (!pending_) {
            throw StateError("no stimulus is pending; '" + stimulus_id + "' was already answered or never presented");
        }
        const auto& t = plan_.trials[cursor_];
        if (stimulus_id != t.stimulus_id) {
            throw StateError("'" + stimulus_id + "' is not the pending stimulus");
        }
        const bool testing = t.kind == PhaseKind::Testing;
        if (testing && !label) {
            throw InvalidArgument("an answer label is required in testing");
        }
        if (label && std::find(t.options->begin(), t.options->end(), *label) == t.options->end()) {
            throw InvalidArgument("'" + *label + "' is not an answer option in " + t.phase);
        }
        Event e;
        e.kind = EventKind::Answer;
        e.phase = t.phase;
        e.stimulus_id = t.stimulus_id;
        e.truth_label = t.truth_label;
        e.given_label = label;
        e.feedback_shown = !testing;
        Feedback fb;
        if (!testing) {
            fb.truth = t.truth_label;
            if (label) {
                fb.correct = *label == t.truth_label;
            }
        }
        emit(std::move(e));
        if (!complete() && plan_.trials[cursor_].rest_before) {
            try {
                emit_rest();
            } catch (const Error&) {
                // next_stimulus logs the rest marker if it is still missing.
            }
        }
        return fb;
    }

    SessionReport finalize() const
    {
        if (!complete()) {
            throw StateError("session " + id_ + " has not completed its testing phase");
        }
        SessionReport report{id_, scheme_.name, assess::ConfusionMatrix(plan_.object_labels), {}};
        for (const auto& a : answers_) {
            if (a.phase == "testing") {
                report.confusion.add(a.truth_label, *a.given_label);
            }
        }
        report.metrics = assess::prf(report.confusion);
        return report;
    }

    const std::string& id() const { return id_; }
    const EncodingScheme& scheme() const { return scheme_; }
    std::uint64_t seed() const { return seed_; }
    int training_quota() const { return training_quota_; }
    const std::string& corpus_ref() const { return corpus_ref_; }
    bool complete() const { return cursor_ == plan_.trials.size(); }
    bool pending() const { return pending_; }
    const std::vector<AnswerRecord>& answers() const { return answers_; }
    const std::map<std::string, int>& play_counts() const { return play_counts_; }
    std::uint64_t events_applied() const { return next_seq_; }
    std::size_t remaining_plays() const { return plan_.trials.size() - cursor_; }
    const Plan& plan() const { return plan_; }

    PhaseKind phase_kind() const
    {
        if (complete()) {
            return PhaseKind::Complete;
        }
        const auto& t = plan_.trials[cursor_];
        return !pending_ && t.rest_before ? PhaseKind::Rest : t.kind;
    }

    std::string phase() const
    {
        switch (phase_kind()) {
        case PhaseKind::Complete: return "complete";
        case PhaseKind::Rest: return "rest";
        default: return plan_.trials[cursor_].phase;
        }
    }

    // The phase that follows a rest; empty otherwise.
    std::string next_phase() const
    {
        return phase_kind() == PhaseKind::Rest ? plan_.trials[cursor_].phase : std::string();
    }

private:
    Session(std::shared_ptr<const stimuli::StimulusCorpus> corpus, std::shared_ptr<EventLog> log, Clock clock)
        : corpus_(std::move(corpus)), log_(std::move(log)), clock_(std::move(clock))
    {
        require(corpus_ != nullptr, "session: no corpus");
        require(log_ != nullptr, "session: no event log");
        require(static_cast<bool>(clock_), "session: no clock");
    }

    void init(const Event& created)
    {
        id_ = created.session_id;
        scheme_ = parse_scheme(created.scheme_text);
        seed_ = created.seed;
        training_quota_ = created.training_quota;
        corpus_ref_ = created.corpus_ref;
        plan_ = make_plan(*corpus_, seed_, training_quota_);
    }

    void emit_rest()
    {
        Event e;
        e.kind = EventKind::Rest;
        e.phase = "rest";
        e.next_phase = plan_.trials[cursor_].phase;
        emit(std::move(e));
    }

    // Persist first, then apply: a failed write leaves the state untouched.
    void emit(Event e)
    {
        e.seq = next_seq_;
        e.timestamp_ms = clock_();
        log_->append(e);
        apply(e);
    }

    void apply(const Event& e)
    {
        auto bad = [&](const std::string& why) {
            return FormatError("event " + std::to_string(e.seq) + " (" + std::string(kind_name(e.kind)) + "): " + why);
        };
        if (e.seq != next_seq_) {
            throw bad("expected sequence number " + std::to_string(next_seq_));
        }
        switch (e.kind) {
        case EventKind::Created:
            if (e.seq != 0) {
                throw bad("duplicate created event");
            }
            break;
        case EventKind::Rest:
            if (complete() || pending_ || !plan_.trials[cursor_].rest_before || rest_logged_) {
                throw bad("rest outside a phase boundary");
            }
            rest_logged_ = true;
            break;
        case EventKind::Presented: {
            if (complete() || pending_) {
                throw bad("presentation while another stimulus is pending");
            }
            const auto& t = plan_.trials[cursor_];
            if (t.stimulus_id != e.stimulus_id || t.phase != e.phase) {
                throw bad("stimulus does not follow the plan");
            }
            if (t.rest_before && !rest_logged_) {
                throw bad("missing rest marker");
            }
            pending_ = true;
            ++play_counts_[e.stimulus_id];
            break;
        }
        case EventKind::Answer: {
            if (!pending_ || plan_.trials[cursor_].stimulus_id != e.stimulus_id) {
                throw bad("answer for a stimulus that is not pending");
            }
            answers_.push_back({e.timestamp_ms, e.phase, e.stimulus_id, e.truth_label, e.given_label, e.feedback_shown});
            pending_ = false;
            rest_logged_ = false;
            ++cursor_;
            break;
        }
        }
        ++next_seq_;
    }

    StimulusPrompt prompt() const
    {
        const auto& t = plan_.trials[cursor_];
        StimulusPrompt p;
        p.stimulus_id = t.stimulus_id;
        p.phase = t.phase;
        p.expects_answer = t.kind == PhaseKind::Testing;
        p.reveal_after = t.kind != PhaseKind::Testing;
        p.rest_before = t.rest_before;
        p.options = *t.options;
        p.phase_done = cursor_ - t.phase_begin;
        p.phase_total = t.phase_size;
        return p;
    }

    std::shared_ptr<const stimuli::StimulusCorpus> corpus_;
    std::shared_ptr<EventLog> log_;
    Clock clock_;

    std::string id_;
    EncodingScheme scheme_;
    std::uint64_t seed_ = 0;
    int training_quota_ = kDefaultTrainingQuota;
    std::string corpus_ref_;
    Plan plan_;

    std::uint64_t next_seq_ = 0;
    std::size_t cursor_ = 0;
    bool pending_ = false;
    bool rest_logged_ = false;
    std::vector<AnswerRecord> answers_;
    std::map<std::string, int> play_counts_;
};

} // namespace voicekit::session

#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "json.hpp"
#include "voicekit/error.hpp"

namespace voicekit::session {

enum class EventKind { Created, Rest, Presented, Answer };

inline std::string_view kind_name(EventKind k)
{
    switch (k) {
    case EventKind::Created: return "created";
    case EventKind::Rest: return "rest";
    case EventKind::Presented: return "presented";
    case EventKind::Answer: return "answer";
    }
    return "?";
}

inline EventKind parse_kind(std::string_view s)
{
    for (auto k : {EventKind::Created, EventKind::Rest, EventKind::Presented, EventKind::Answer}) {
        if (kind_name(k) == s) {
            return k;
        }
    }
    throw FormatError("unknown event kind '" + std::string(s) + "'");
}

// One line of a session's append-only log. Which fields are meaningful depends on kind:
//   created   session_id, scheme, scheme_text, corpus_ref, corpus_hash, seed, training_quota
//   rest      phase ("rest"), next_phase
//   presented phase, stimulus_id
//   answer    phase, stimulus_id, truth_label, given_label (null when listen-only), feedback_shown
struct Event {
    std::uint64_t seq = 0;
    EventKind kind = EventKind::Created;
    std::int64_t timestamp_ms = 0;

    std::string phase;
    std::string stimulus_id;
    std::string truth_label;
    std::optional<std::string> given_label;
    bool feedback_shown = false;
    std::string next_phase;

    std::string session_id;
    std::string scheme;
    std::string scheme_text;
    std::string corpus_ref;
    std::string corpus_hash;
    std::uint64_t seed = 0;
    int training_quota = 0;
};

inline nlohmann::json to_json(const Event& e)
{
    nlohmann::json j;
    j["seq"] = e.seq;
    j["kind"] = kind_name(e.kind);
    j["timestamp"] = e.timestamp_ms;
    switch (e.kind) {
    case EventKind::Created:
        j["session_id"] = e.session_id;
        j["scheme"] = e.scheme;
        j["scheme_text"] = e.scheme_text;
        j["corpus_ref"] = e.corpus_ref;
        j["corpus_hash"] = e.corpus_hash;
        j["seed"] = e.seed;
        j["training_quota"] = e.training_quota;
        break;
    case EventKind::Rest:
        j["phase"] = e.phase;
        j["next_phase"] = e.next_phase;
        break;
    case EventKind::Presented:
        j["phase"] = e.phase;
        j["stimulus_id"] = e.stimulus_id;
        break;
    case EventKind::Answer:
        j["phase"] = e.phase;
        j["stimulus_id"] = e.stimulus_id;
        j["truth_label"] = e.truth_label;
        j["given_label"] = e.given_label ? nlohmann::json(*e.given_label) : nlohmann::json(nullptr);
        j["feedback_shown"] = e.feedback_shown;
        break;
    }
    return j;
}

inline Event event_from_json(const nlohmann::json& j)
{
    try {
        Event e;
        e.seq = j.at("seq").get<std::uint64_t>();
        e.kind = parse_kind(j.at("kind").get<std::string>());
        e.timestamp_ms = j.at("timestamp").get<std::int64_t>();
        switch (e.kind) {
        case EventKind::Created:
            e.session_id = j.at("session_id").get<std::string>();
            e.scheme = j.at("scheme").get<std::string>();
            e.scheme_text = j.at("scheme_text").get<std::string>();
            e.corpus_ref = j.at("corpus_ref").get<std::string>();
            e.corpus_hash = j.at("corpus_hash").get<std::string>();
            e.seed = j.at("seed").get<std::uint64_t>();
            e.training_quota = j.at("training_quota").get<int>();
            break;
        case EventKind::Rest:
            e.phase = j.at("phase").get<std::string>();
            e.next_phase = j.at("next_phase").get<std::string>();
            break;
        case EventKind::Presented:
            e.phase = j.at("phase").get<std::string>();
            e.stimulus_id = j.at("stimulus_id").get<std::string>();
            break;
        case EventKind::Answer:
            e.phase = j.at("phase").get<std::string>();
            e.stimulus_id = j.at("stimulus_id").get<std::string>();
            e.truth_label = j.at("truth_label").get<std::string>();
            if (!j.at("given_label").is_null()) {
                e.given_label = j.at("given_label").get<std::string>();
            }
            e.feedback_shown = j.at("feedback_shown").get<bool>();
            break;
        }
        return e;
    } catch (const nlohmann::json::exception& ex) {
        throw FormatError(std::string("event log: ") + ex.what());
    }
}

inline std::string event_line(const Event& e) { return to_json(e).dump() + "\n"; }

inline Event parse_event_line(std::string_view line)
{
    try {
        return event_from_json(nlohmann::json::parse(line));
    } catch (const nlohmann::json::parse_error& ex) {
        throw FormatError(std::string("event log: ") + ex.what());
    }
}

} // namespace voicekit::session

#pragma once

#include <filesystem>
#include <memory>
#include <string>

#include "httplib.h"
#include "json.hpp"
#include "voicekit/codec/encoder.hpp"
#include "voicekit/dsp/wav.hpp"
#include "voicekit/service/config.hpp"
#include "voicekit/session/store.hpp"

namespace voicekit::service {

using nlohmann::json;

inline json prompt_json(const session::StimulusPrompt& p, const std::string& scheme)
{
    return {{"stimulus_id", p.stimulus_id},
            {"phase", p.phase},
            {"expects_answer", p.expects_answer},
            {"reveal_after", p.reveal_after},
            {"rest_before", p.rest_before},
            {"options", p.options},
            {"progress", {{"done", p.phase_done}, {"total", p.phase_total}}},
            {"audio_url", "/audio/" + p.stimulus_id + "?scheme=" + scheme}};
}

inline json report_json(const session::SessionReport& r)
{
    json per_class = json::array();
    for (const auto& c : r.metrics.per_class) {
        per_class.push_back({{"label", c.label}, {"precision", c.precision}, {"recall", c.recall}, {"f1", c.f1}});
    }
    return {{"session_id", r.session_id},
            {"scheme", r.scheme},
            {"labels", r.confusion.labels},
            {"confusion", r.confusion.counts},
            {"per_class", per_class},
            {"macro_precision", r.metrics.macro_precision},
            {"macro_recall", r.metrics.macro_recall},
            {"macro_f1", r.metrics.macro_f1},
            {"n_items", r.metrics.n_items}};
}

inline json scheme_json(const EncodingScheme& s)
{
    json j = {{"name", s.name},
              {"hash", scheme_hash(s)},
              {"duration_s", s.duration_s},
              {"sample_rate_hz", s.sample_rate_hz},
              {"crossfade_fraction", s.crossfade_fraction}};
    if (const auto* e = std::get_if<ExponentialMap>(&s.pf)) {
        j["pf"] = {{"kind", "exponential"}, {"f_min", e->f_min}, {"f_max", e->f_max}};
    } else {
        const auto& t = std::get<RectifiedTanhMap>(s.pf);
        j["pf"] = {{"kind", "rectified_tanh"}, {"s", t.range_hz}, {"alpha", t.alpha}};
    }
    return j;
}

// HTTP adapter over the session store, the codec and the scheme registry.
// Errors are {"code", "message"}: 400 bad_request, 404 not_found, 409 conflict, 500 internal.
class Service {
public:
    Service(ServiceConfig config, std::shared_ptr<const stimuli::StimulusCorpus> corpus,
            session::Clock clock = session::system_clock_ms)
        : config_(std::move(config)), corpus_(std::move(corpus))
    {
        prepare_data_dir(config_);
        std::filesystem::create_directories(cache_dir());
        store_ = std::make_unique<session::SessionStore>(config_.data_dir, corpus_, config_.corpus, std::move(clock));
        routes();
    }

    static std::unique_ptr<Service> from_config(const ServiceConfig& config)
    {
        require(!config.corpus.empty(), "config: 'corpus' is required to serve sessions");
        auto corpus = std::make_shared<const stimuli::StimulusCorpus>(stimuli::load_corpus(config.corpus));
        return std::make_unique<Service>(config, std::move(corpus));
    }

    // Binds the configured address; port 0 picks a free port. Returns the bound port.
    int bind()
    {
        if (config_.listen_port == 0) {
            port_ = server_.bind_to_any_port(config_.listen_host);
        } else {
            port_ = server_.bind_to_port(config_.listen_host, config_.listen_port) ? config_.listen_port : -1;
        }
        if (port_ < 0) {
            throw Error("cannot bind " + config_.listen_host + ":" + std::to_string(config_.listen_port));
        }
        return port_;
    }

    // Blocks until stop().
    void run()
    {
        if (!server_.listen_after_bind()) {
            throw Error("server stopped unexpectedly");
        }
    }

    void stop() { server_.stop(); }
    void wait_until_ready() const { server_.wait_until_ready(); }
    int port() const { return port_; }
    session::SessionStore& store() { return *store_; }
    const ServiceConfig& config() const { return config_; }

    // WAV bytes of a corpus stimulus under a registered scheme, cached on disk.
    std::string audio(const std::string& stimulus_id, const std::string& scheme_name)
    {
        const auto& scheme = config_.scheme(scheme_name);
        const auto* item = corpus_->find(stimulus_id);
        if (!item) {
            throw NotFound("unknown stimulus '" + stimulus_id + "'");
        }
        const auto path = cache_dir() + "/" + stimulus_id + "_" + scheme_hash(scheme) + ".wav";
        if (std::filesystem::exists(path)) {
            return detail::read_file(path);
        }
        auto bytes = dsp::encode_wav(encode(item->image, scheme));
        detail::write_file_atomic(path, bytes);
        return bytes;
    }

private:
    std::string cache_dir() const { return config_.data_dir + "/audio_cache"; }

    static void send_json(httplib::Response& res, int status, const json& body)
    {
        res.status = status;
        res.set_content(body.dump(), "application/json");
    }

    static void send_error(httplib::Response& res, int status, const std::string& code, const std::string& message)
    {
        send_json(res, status, {{"code", code}, {"message", message}});
    }

    template <class F>
    static void guarded(httplib::Response& res, F&& fn)
    {
        try {
            fn();
        } catch (const NotFound& e) {
            send_error(res, 404, "not_found", e.what());
        } catch (const StateError& e) {
            send_error(res, 409, "conflict", e.what());
        } catch (const InvalidArgument& e) {
            send_error(res, 400, "bad_request", e.what());
        } catch (const FormatError& e) {
            send_error(res, 400, "bad_request", e.what());
        } catch (const json::exception& e) {
            send_error(res, 400, "bad_request", std::string("malformed JSON body: ") + e.what());
        } catch (const std::exception& e) {
            send_error(res, 500, "internal", e.what());
        }
    }

    static json body_of(const httplib::Request& req)
    {
        if (req.body.empty()) {
            return json::object();
        }
        auto j = json::parse(req.body);
        if (!j.is_object()) {
            throw InvalidArgument("request body must be a JSON object");
        }
        return j;
    }

    void routes()
    {
        server_.set_tcp_nodelay(true);
        server_.Get("/schemes", [this](const httplib::Request&, httplib::Response& res) {
            guarded(res, [&] {
                json list = json::array();
                for (const auto& [name, s] : config_.schemes) {
                    list.push_back(scheme_json(s));
                }
                send_json(res, 200, list);
            });
        });

        server_.Post("/sessions", [this](const httplib::Request& req, httplib::Response& res) {
            guarded(res, [&] {
                const auto body = body_of(req);
                if (!body.contains("scheme") || !body["scheme"].is_string()) {
                    throw InvalidArgument("'scheme' (string) is required");
                }
                const auto& scheme = config_.scheme(body["scheme"].get<std::string>());
                std::optional<std::uint64_t> seed;
                if (body.contains("seed") && !body["seed"].is_null()) {
                    seed = body["seed"].get<std::uint64_t>();
                }
                const int quota = body.value("training_quota", config_.training_quota);
                const auto id = store_->create(scheme, seed, quota);
                send_json(res, 201, {{"session_id", id}, {"scheme", scheme.name}, {"phase", "lesson1"}});
            });
        });

        server_.Get(R"(/sessions/([A-Za-z0-9_-]+))", [this](const httplib::Request& req, httplib::Response& res) {
            guarded(res, [&] {
                const auto body = store_->with_session(req.matches[1], [](session::Session& s) {
                    return json{{"session_id", s.id()},
                                {"scheme", s.scheme().name},
                                {"phase", s.phase()},
                                {"next_phase", s.next_phase()},
                                {"complete", s.complete()},
                                {"pending", s.pending()},
                                {"answers", s.answers().size()},
                                {"remaining", s.remaining_plays()}};
                });
                send_json(res, 200, body);
            });
        });

        server_.Get(R"(/sessions/([A-Za-z0-9_-]+)/next)", [this](const httplib::Request& req, httplib::Response& res) {
            guarded(res, [&] {
                const auto body = store_->with_session(req.matches[1], [](session::Session& s) {
                    return prompt_json(s.next_stimulus(), s.scheme().name);
                });
                send_json(res, 200, body);
            });
        });

        server_.Post(R"(/sessions/([A-Za-z0-9_-]+)/answers)",
                     [this](const httplib::Request& req, httplib::Response& res) {
                         guarded(res, [&] {
                             const auto body = body_of(req);
                             if (!body.contains("stimulus_id") || !body["stimulus_id"].is_string()) {
                                 throw InvalidArgument("'stimulus_id' (string) is required");
                             }
                             std::optional<std::string> label;
                             if (body.contains("label") && !body["label"].is_null()) {
                                 label = body["label"].get<std::string>();
                             }
                             const auto out = store_->with_session(req.matches[1], [&](session::Session& s) {
                                 const auto fb = s.submit_answer(body["stimulus_id"].get<std::string>(), label);
                                 json j = {{"accepted", true}, {"phase", s.phase()}, {"complete", s.complete()}};
                                 if (fb.truth) {
                                     j["truth"] = *fb.truth;
                                 }
                                 if (fb.correct) {
                                     j["correct"] = *fb.correct;
                                 }
                                 return j;
                             });
                             send_json(res, 200, out);
                         });
                     });

        server_.Get(R"(/sessions/([A-Za-z0-9_-]+)/report)",
                    [this](const httplib::Request& req, httplib::Response& res) {
                        guarded(res, [&] { send_json(res, 200, report_json(store_->report(req.matches[1]))); });
                    });

        server_.Get(R"(/groups/([A-Za-z0-9_-]+))", [this](const httplib::Request& req, httplib::Response& res) {
            guarded(res, [&] {
                const auto g = store_->group(req.matches[1]);
                send_json(res, 200,
                          {{"scheme", g.scheme},
                           {"sessions", g.session_ids},
                           {"macro_precision", {{"mean", g.precision.mean}, {"sd", g.precision.sd}}},
                           {"macro_recall", {{"mean", g.recall.mean}, {"sd", g.recall.sd}}},
                           {"macro_f1", {{"mean", g.f1.mean}, {"sd", g.f1.sd}}}});
            });
        });

        server_.Get(R"(/audio/([^/]+))", [this](const httplib::Request& req, httplib::Response& res) {
            guarded(res, [&] {
                if (!req.has_param("scheme")) {
                    throw InvalidArgument("'scheme' query parameter is required");
                }
                const auto scheme = req.get_param_value("scheme");
                const auto bytes = audio(req.matches[1], scheme);
                res.status = 200;
                res.set_header("Cache-Control", "public, max-age=31536000, immutable");
                res.set_header("ETag", "\"" + std::string(req.matches[1]) + "-" + scheme_hash(config_.scheme(scheme)) + "\"");
                res.set_content(bytes, "audio/wav");
            });
        });

        server_.set_error_handler([](const httplib::Request& req, httplib::Response& res) {
            if (res.body.empty()) {
                const char* code = res.status == 404 ? "not_found" : res.status >= 500 ? "internal" : "bad_request";
                send_error(res, res.status, code, req.method + " " + req.path + ": " + httplib::status_message(res.status));
            }
        });

        if (!config_.static_dir.empty()) {
            if (!server_.set_mount_point("/", config_.static_dir)) {
                throw InvalidArgument("static_dir '" + config_.static_dir + "' is not a directory");
            }
        }
    }

    ServiceConfig config_;
    std::shared_ptr<const stimuli::StimulusCorpus> corpus_;
    std::unique_ptr<session::SessionStore> store_;
    httplib::Server server_;
    int port_ = -1;
};

} // namespace voicekit::service

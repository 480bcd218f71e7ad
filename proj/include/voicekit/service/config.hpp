#pragma once

#include <cstdlib>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <string>

#include "voicekit/codec/scheme.hpp"
#include "voicekit/detail/kv.hpp"
#include "voicekit/session/plan.hpp"

namespace voicekit::service {

// Configuration file keys (key = value lines, '#' comments):
//   listen_host      address to bind (default 127.0.0.1)
//   listen_port      TCP port (default 8080)
//   data_dir         session logs, reports and the audio cache (default ./data)
//   corpus           stimulus corpus manifest (required for serve)
//   static_dir       web UI assets served at / (optional)
//   training_quota   advanced-training plays per class (default 15)
//   scheme.<NAME>    preset name or scheme file; NAME must equal the scheme's name.
//                    Without any scheme.* key the three presets are registered.
// Relative paths resolve against the configuration file's directory.
// Environment: VOICEKIT_LISTEN=host:port and VOICEKIT_DATA_DIR override the file.
struct ServiceConfig {
    std::string listen_host = "127.0.0.1";
    int listen_port = 8080;
    std::string data_dir = "data";
    std::string corpus;
    std::string static_dir;
    int training_quota = session::kDefaultTrainingQuota;
    std::map<std::string, EncodingScheme> schemes;

    const EncodingScheme& scheme(const std::string& name) const
    {
        const auto it = schemes.find(name);
        if (it == schemes.end()) {
            throw NotFound("unknown scheme '" + name + "'");
        }
        return it->second;
    }
};

using EnvLookup = std::function<std::optional<std::string>(const std::string&)>;

inline std::optional<std::string> process_env(const std::string& name)
{
    const char* v = std::getenv(name.c_str());
    return v ? std::optional<std::string>(v) : std::nullopt;
}

inline void apply_listen(ServiceConfig& cfg, const std::string& value)
{
    const auto colon = value.rfind(':');
    if (colon == std::string::npos) {
        throw InvalidArgument("listen address must be host:port, got '" + value + "'");
    }
    cfg.listen_host = value.substr(0, colon);
    const auto port = detail::parse_int(value.substr(colon + 1), "listen port");
    require(port >= 0 && port <= 65535, "listen port out of range");
    cfg.listen_port = static_cast<int>(port);
}

inline ServiceConfig config_from_kv(const detail::KeyValues& kv, const std::filesystem::path& base,
                                    const EnvLookup& env = process_env)
{
    auto resolve = [&](const std::string& p) {
        const std::filesystem::path path(p);
        return (path.is_absolute() ? path : base / path).lexically_normal().string();
    };
    ServiceConfig cfg;
    for (const auto& key : kv.keys()) {
        const auto& value = kv.get(key);
        if (key == "listen_host") {
            cfg.listen_host = value;
        } else if (key == "listen_port") {
            apply_listen(cfg, cfg.listen_host + ":" + value);
        } else if (key == "data_dir") {
            cfg.data_dir = resolve(value);
        } else if (key == "corpus") {
            cfg.corpus = resolve(value);
        } else if (key == "static_dir") {
            cfg.static_dir = resolve(value);
        } else if (key == "training_quota") {
            const auto q = detail::parse_int(value, key);
            require(q >= 1, "training_quota must be >= 1");
            cfg.training_quota = static_cast<int>(q);
        } else if (key.rfind("scheme.", 0) == 0) {
            const std::string name = key.substr(7);
            const bool preset = presets::find(value).has_value();
            auto scheme = load_scheme(preset ? value : resolve(value));
            if (scheme.name != name) {
                throw InvalidArgument("config: " + key + " loads a scheme named '" + scheme.name + "'");
            }
            cfg.schemes.emplace(name, std::move(scheme));
        } else {
            throw InvalidArgument("config: unknown key '" + key + "'");
        }
    }
    if (cfg.schemes.empty()) {
        for (auto& s : presets::all()) {
            cfg.schemes.emplace(s.name, s);
        }
    }
    if (auto listen = env("VOICEKIT_LISTEN")) {
        apply_listen(cfg, *listen);
    }
    if (auto dir = env("VOICEKIT_DATA_DIR")) {
        cfg.data_dir = *dir;
    }
    return cfg;
}

inline ServiceConfig load_config(const std::string& path, const EnvLookup& env = process_env)
{
    const auto kv = detail::KeyValues::load(path);
    return config_from_kv(kv, std::filesystem::path(path).parent_path(), env);
}

// Creates the data directory and proves it is writable.
inline void prepare_data_dir(const ServiceConfig& cfg)
{
    std::filesystem::create_directories(cfg.data_dir);
    detail::write_file_atomic(cfg.data_dir + "/.writable", "ok\n");
}

} // namespace voicekit::service

#pragma once

#include <atomic>
#include <filesystem>
#include <memory>
#include <random>
#include <string>

#include "voicekit/service/commands.hpp"
#include "voicekit/session/session.hpp"

namespace fixture {

// Lessons plus the default object corpus, built once per process.
inline std::shared_ptr<const voicekit::stimuli::StimulusCorpus> full_corpus()
{
    static const auto corpus = std::make_shared<const voicekit::stimuli::StimulusCorpus>(
        voicekit::service::generate_corpus(voicekit::service::GenOptions{"all", std::nullopt, 0, 10, 72}));
    return corpus;
}

class TempDir {
public:
    TempDir()
    {
        static std::atomic<int> counter{0};
        path_ = std::filesystem::temp_directory_path() /
                ("voicekit_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
        std::filesystem::remove_all(path_);
        std::filesystem::create_directories(path_);
    }
    ~TempDir()
    {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    std::string str() const { return path_.string(); }
    std::string operator/(const std::string& name) const { return (path_ / name).string(); }

private:
    std::filesystem::path path_;
};

// Ticks once per call, so replaying a prefix of n events resumes at start + n.
inline voicekit::session::Clock ticking_clock(std::int64_t start = 1'000'000)
{
    auto t = std::make_shared<std::int64_t>(start);
    return [t] { return (*t)++; };
}

} // namespace fixture

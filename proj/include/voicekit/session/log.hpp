#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <fcntl.h>
#include <unistd.h>

#include "voicekit/session/events.hpp"

namespace voicekit::session {

class EventLog {
public:
    virtual ~EventLog() = default;
    // Must either durably append the event or throw, leaving the log unchanged.
    virtual void append(const Event& e) = 0;
};

class MemoryLog : public EventLog {
public:
    void append(const Event& e) override { events_.push_back(e); }
    const std::vector<Event>& events() const { return events_; }

private:
    std::vector<Event> events_;
};

// JSON-lines file, one event per line, written with O_APPEND and fsync per event.
class FileLog : public EventLog {
public:
    explicit FileLog(std::string path) : path_(std::move(path))
    {
        fd_ = ::open(path_.c_str(), O_WRONLY | O_CREAT | O_APPEND | O_CLOEXEC, 0644);
        if (fd_ < 0) {
            throw Error("cannot open event log " + path_);
        }
    }
    FileLog(const FileLog&) = delete;
    FileLog& operator=(const FileLog&) = delete;
    ~FileLog() override
    {
        if (fd_ >= 0) {
            ::close(fd_);
        }
    }

    void append(const Event& e) override
    {
        const std::string line = event_line(e);
        const off_t before = ::lseek(fd_, 0, SEEK_END);
        std::size_t done = 0;
        while (done < line.size()) {
            const ssize_t n = ::write(fd_, line.data() + done, line.size() - done);
            if (n <= 0) {
                if (before >= 0 && ::ftruncate(fd_, before) != 0) {
                    throw Error("write failed on event log " + path_ + " and the partial line remains");
                }
                throw Error("write failed on event log " + path_);
            }
            done += static_cast<std::size_t>(n);
        }
        if (::fsync(fd_) != 0) {
            throw Error("fsync failed on event log " + path_);
        }
    }

    const std::string& path() const { return path_; }

private:
    std::string path_;
    int fd_ = -1;
};

// Reads a log written by FileLog. A final line without its newline is the
// remnant of an interrupted write and is dropped.
inline std::vector<Event> read_event_log(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw NotFound("no event log at " + path);
    }
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    std::vector<Event> out;
    std::size_t pos = 0;
    while (pos < text.size()) {
        const auto nl = text.find('\n', pos);
        if (nl == std::string::npos) {
            break;
        }
        const std::string_view line(text.data() + pos, nl - pos);
        if (!line.empty()) {
            out.push_back(parse_event_line(line));
        }
        pos = nl + 1;
    }
    return out;
}

// Cuts an interrupted final line off the file so appends start on a fresh line.
inline void truncate_partial_tail(const std::string& path)
{
    const std::string text = [&] {
        std::ifstream in(path, std::ios::binary);
        return std::string((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    }();
    const auto nl = text.rfind('\n');
    const std::size_t keep = nl == std::string::npos ? 0 : nl + 1;
    if (keep != text.size()) {
        std::filesystem::resize_file(path, keep);
    }
}

} // namespace voicekit::session

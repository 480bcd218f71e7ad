#pragma once

#include <atomic>
#include <charconv>
#include <cstdint>
#include <cstdio>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <unistd.h>

#include "voicekit/error.hpp"

namespace voicekit::detail {

inline std::string trim(std::string_view s)
{
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(first, last - first + 1));
}

inline std::vector<std::string> split(std::string_view s, char sep)
{
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = s.find(sep, start);
        if (pos == std::string_view::npos) {
            out.emplace_back(s.substr(start));
            return out;
        }
        out.emplace_back(s.substr(start, pos - start));
        start = pos + 1;
    }
}

// Shortest decimal form that parses back to the same double.
inline std::string format_double(double v)
{
    if (std::isnan(v)) {
        return "nan";
    }
    if (std::isinf(v)) {
        return v > 0 ? "inf" : "-inf";
    }
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, end);
}

inline double parse_double(std::string_view text, std::string_view what)
{
    const std::string t = trim(text);
    if (t == "nan") {
        return std::nan("");
    }
    if (t == "inf") {
        return INFINITY;
    }
    if (t == "-inf") {
        return -INFINITY;
    }
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc() || ptr != t.data() + t.size()) {
        throw FormatError("invalid number for " + std::string(what) + ": '" + t + "'");
    }
    return v;
}

inline long long parse_int(std::string_view text, std::string_view what)
{
    const std::string t = trim(text);
    long long v = 0;
    auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc() || ptr != t.data() + t.size()) {
        throw FormatError("invalid integer for " + std::string(what) + ": '" + t + "'");
    }
    return v;
}

// Plain-text "key = value" document. Blank lines and lines starting with '#' are ignored.
// Keys keep their first-seen order so written documents are stable.
class KeyValues {
public:
    static KeyValues parse(std::string_view text)
    {
        KeyValues kv;
        std::size_t line_no = 0;
        for (const auto& raw : split(text, '\n')) {
            ++line_no;
            const std::string line = trim(raw);
            if (line.empty() || line.front() == '#') {
                continue;
            }
            const auto eq = line.find('=');
            if (eq == std::string::npos) {
                throw FormatError("line " + std::to_string(line_no) + ": expected 'key = value'");
            }
            const std::string key = trim(std::string_view(line).substr(0, eq));
            if (key.empty()) {
                throw FormatError("line " + std::to_string(line_no) + ": empty key");
            }
            if (kv.has(key)) {
                throw FormatError("duplicate key '" + key + "'");
            }
            kv.set(key, trim(std::string_view(line).substr(eq + 1)));
        }
        return kv;
    }

    static KeyValues load(const std::string& path)
    {
        std::ifstream in(path, std::ios::binary);
        if (!in) {
            throw NotFound("cannot open " + path);
        }
        std::stringstream ss;
        ss << in.rdbuf();
        return parse(ss.str());
    }

    bool has(const std::string& key) const { return values_.count(key) != 0; }

    void set(const std::string& key, std::string value)
    {
        if (!has(key)) {
            order_.push_back(key);
        }
        values_[key] = std::move(value);
    }

    void set(const std::string& key, double value) { set(key, format_double(value)); }
    void set(const std::string& key, long long value) { set(key, std::to_string(value)); }
    void set(const std::string& key, int value) { set(key, std::to_string(value)); }
    void set(const std::string& key, std::size_t value) { set(key, std::to_string(value)); }
    void set(const std::string& key, const char* value) { set(key, std::string(value)); }

    const std::string& get(const std::string& key) const
    {
        const auto it = values_.find(key);
        if (it == values_.end()) {
            throw FormatError("missing key '" + key + "'");
        }
        return it->second;
    }

    std::string get_or(const std::string& key, const std::string& fallback) const
    {
        return has(key) ? get(key) : fallback;
    }

    double get_double(const std::string& key) const { return parse_double(get(key), key); }
    long long get_int(const std::string& key) const { return parse_int(get(key), key); }

    const std::vector<std::string>& keys() const { return order_; }

    std::string str() const
    {
        std::string out;
        for (const auto& k : order_) {
            out += k + " = " + values_.at(k) + "\n";
        }
        return out;
    }

private:
    std::map<std::string, std::string> values_;
    std::vector<std::string> order_;
};

// Write-to-temp-then-rename so readers never observe a half-written file.
inline void write_file_atomic(const std::string& path, std::string_view bytes)
{
    static std::atomic<unsigned long> counter{0};
    const std::string tmp = path + ".tmp." + std::to_string(::getpid()) + "." + std::to_string(counter++);
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw Error("cannot write " + tmp);
        }
        out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
        if (!out) {
            throw Error("short write to " + tmp);
        }
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0) {
        throw Error("cannot rename " + tmp + " to " + path);
    }
}

inline std::string read_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw NotFound("cannot open " + path);
    }
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// 64-bit FNV-1a; used for cache keys, not security.
inline std::uint64_t fnv1a(std::string_view bytes)
{
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

} // namespace voicekit::detail

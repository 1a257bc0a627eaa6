#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>

namespace optcast {

// Flat `key = value` file with `[section]` headers; keys are exposed as
// "section.key" ("key" before any header). '#' starts a comment.
class Config {
public:
    Config() = default;
    static Config parse(std::string_view text);
    static Config load(const std::string& path);

    bool has(const std::string& key) const { return entries_.count(key) != 0; }
    std::optional<std::string> get(const std::string& key) const;
    double get_double(const std::string& key, double fallback) const;
    std::int64_t get_int(const std::string& key, std::int64_t fallback) const;
    std::string get_string(const std::string& key, const std::string& fallback) const;
    bool get_bool(const std::string& key, bool fallback) const;

    const std::map<std::string, std::string>& entries() const { return entries_; }

private:
    std::map<std::string, std::string> entries_;
};

}  // namespace optcast

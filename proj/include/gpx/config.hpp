#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace gpx {

/// Flat key=value settings with dotted keys. Files may also group keys under
/// [section] headers, which prefix the keys that follow ("[risk]" then
/// "alpha=1" is "risk.alpha=1"). '#' starts a comment.
class Config {
public:
    static Config parse(std::string_view text);
    static Config load(const std::string& path);

    void set(const std::string& key, const std::string& value);
    bool has(const std::string& key) const;
    std::optional<std::string> get(const std::string& key) const;

    std::string get_string(const std::string& key) const;
    std::string get_string(const std::string& key, const std::string& fallback) const;
    double get_double(const std::string& key) const;
    double get_double(const std::string& key, double fallback) const;
    std::uint64_t get_uint(const std::string& key) const;
    std::uint64_t get_uint(const std::string& key, std::uint64_t fallback) const;
    /// Comma-separated list of numbers.
    std::vector<double> get_doubles(const std::string& key) const;

    const std::map<std::string, std::string>& values() const { return values_; }

private:
    std::map<std::string, std::string> values_;
};

double parse_double(const std::string& key, const std::string& text);
std::uint64_t parse_uint(const std::string& key, const std::string& text);

}  // namespace gpx

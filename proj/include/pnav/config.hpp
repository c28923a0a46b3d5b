#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace pnav {

struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// Flat key/value tree parsed from INI-style text: `[section]` headers and
/// `key = value` lines, addressed here as "section.key". Unknown keys are
/// rejected by the loaders, not the parser.
class ConfigTree {
public:
    static ConfigTree parse(std::istream& in);
    static ConfigTree parse_file(const std::string& path);

    bool has(const std::string& key) const { return values_.count(key) > 0; }
    void set(const std::string& key, const std::string& value) { values_[key] = value; }

    std::string get_string(const std::string& key, const std::string& fallback) const;
    double get_double(const std::string& key, double fallback) const;
    int get_int(const std::string& key, int fallback) const;
    std::uint64_t get_u64(const std::string& key, std::uint64_t fallback) const;
    bool get_bool(const std::string& key, bool fallback) const;
    /// Whitespace-separated doubles, e.g. a point: `0.5 0.5 0.5`.
    std::vector<double> get_doubles(const std::string& key) const;
    /// Comma-separated integers, e.g. `5,10,15`.
    std::vector<int> get_int_list(const std::string& key) const;

    const std::map<std::string, std::string>& values() const { return values_; }

private:
    std::map<std::string, std::string> values_;
};

} // namespace pnav

#pragma once

// Run configuration: `key = value` lines grouped in `[section]`s, `#` comments.
//
//   [problem]
//   kind = general
//   n = 2
//
// Values are kept as trimmed text; typed accessors raise ConfigError naming the
// offending key. serialize() writes sections and keys in sorted order, so
// parse(serialize(c)) == c.

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace mixhess {

class Config {
public:
    using Section = std::map<std::string, std::string>;

    static Config parse(std::string_view text, std::string_view origin = "<config>");
    static Config load(const std::filesystem::path& path);
    std::string serialize() const;

    bool has(const std::string& section, const std::string& key) const;
    bool has_section(const std::string& section) const { return sections_.count(section) != 0; }
    const std::string& raw(const std::string& section, const std::string& key) const;
    void set(const std::string& section, const std::string& key, std::string value);
    void erase(const std::string& section, const std::string& key);

    std::string get_string(const std::string& section, const std::string& key) const;
    std::int64_t get_int(const std::string& section, const std::string& key) const;
    std::uint64_t get_uint(const std::string& section, const std::string& key) const;
    double get_double(const std::string& section, const std::string& key) const;
    bool get_bool(const std::string& section, const std::string& key) const;
    std::vector<double> get_doubles(const std::string& section, const std::string& key) const;
    std::vector<std::int64_t> get_ints(const std::string& section, const std::string& key) const;

    const std::map<std::string, Section>& sections() const { return sections_; }
    bool operator==(const Config&) const = default;

private:
    std::map<std::string, Section> sections_;
};

/// Keys a command accepts; `required` keys must be present, `optional` keys may be.
struct ConfigSchema {
    std::vector<std::pair<std::string, std::string>> required;
    std::vector<std::pair<std::string, std::string>> optional;
};

/// Schema of a command given the config (required keys depend on e.g. problem.kind
/// and problem.k). Throws ConfigError for an unknown command.
ConfigSchema schema_for(const std::string& command, const Config& config);

/// Throws ConfigError on unknown or missing keys.
void check_schema(const std::string& command, const Config& config);

}  // namespace mixhess

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace gwlab {

// Flat key-value config text: `[section]` headers, `key = value` lines,
// blank lines and `#` comments ignored.
class ConfigFile {
public:
    using Section = std::map<std::string, std::string>;

    static ConfigFile parse_text(const std::string& text);
    static ConfigFile load(const std::string& path);

    bool has_section(const std::string& name) const { return sections_.count(name) > 0; }
    const Section& section(const std::string& name) const;

private:
    std::map<std::string, Section> sections_;
};

// Typed accessors over one section; missing keys fall back to defaults and
// malformed values throw ConfigError naming the key.
class SectionReader {
public:
    explicit SectionReader(const ConfigFile::Section& section) : section_(section) {}

    std::string get_string(const std::string& key, const std::string& fallback) const;
    std::string require_string(const std::string& key) const;
    double get_double(const std::string& key, double fallback) const;
    std::int64_t get_int(const std::string& key, std::int64_t fallback) const;
    std::uint64_t get_u64(const std::string& key, std::uint64_t fallback) const;
    std::vector<double> get_doubles(const std::string& key, std::vector<double> fallback) const;

private:
    std::optional<std::string> find(const std::string& key) const;
    const ConfigFile::Section& section_;
};

}  // namespace gwlab

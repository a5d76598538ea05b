#include "gwlab/config.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "gwlab/errors.hpp"

namespace gwlab {

namespace {

std::string strip(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

}  // namespace

ConfigFile ConfigFile::parse_text(const std::string& text) {
    ConfigFile out;
    std::istringstream is(text);
    std::string line;
    std::string current;
    while (std::getline(is, line)) {
        const std::string t = strip(line);
        if (t.empty() || t[0] == '#') continue;
        if (t.front() == '[') {
            if (t.back() != ']') throw ConfigError("config: unterminated section header: " + t);
            current = strip(t.substr(1, t.size() - 2));
            out.sections_[current];
            continue;
        }
        const std::size_t eq = t.find('=');
        if (eq == std::string::npos) throw ConfigError("config: expected key = value: " + t);
        if (current.empty()) throw ConfigError("config: key outside any [section]: " + t);
        out.sections_[current][strip(t.substr(0, eq))] = strip(t.substr(eq + 1));
    }
    return out;
}

ConfigFile ConfigFile::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot open " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return parse_text(os.str());
}

const ConfigFile::Section& ConfigFile::section(const std::string& name) const {
    const auto it = sections_.find(name);
    if (it == sections_.end()) throw ConfigError("config: missing section [" + name + "]");
    return it->second;
}

std::optional<std::string> SectionReader::find(const std::string& key) const {
    const auto it = section_.find(key);
    if (it == section_.end()) return std::nullopt;
    return it->second;
}

std::string SectionReader::get_string(const std::string& key, const std::string& fallback) const {
    return find(key).value_or(fallback);
}

std::string SectionReader::require_string(const std::string& key) const {
    const auto v = find(key);
    if (!v) throw ConfigError("config: missing key '" + key + "'");
    return *v;
}

double SectionReader::get_double(const std::string& key, double fallback) const {
    const auto v = find(key);
    if (!v) return fallback;
    char* end = nullptr;
    const double d = std::strtod(v->c_str(), &end);
    if (end == v->c_str() || *end != '\0') throw ConfigError("config: key '" + key + "' is not a number");
    return d;
}

std::int64_t SectionReader::get_int(const std::string& key, std::int64_t fallback) const {
    const auto v = find(key);
    if (!v) return fallback;
    char* end = nullptr;
    const long long d = std::strtoll(v->c_str(), &end, 10);
    if (end == v->c_str() || *end != '\0') throw ConfigError("config: key '" + key + "' is not an integer");
    return d;
}

std::uint64_t SectionReader::get_u64(const std::string& key, std::uint64_t fallback) const {
    const auto v = find(key);
    if (!v) return fallback;
    char* end = nullptr;
    const unsigned long long d = std::strtoull(v->c_str(), &end, 10);
    if (end == v->c_str() || *end != '\0') throw ConfigError("config: key '" + key + "' is not an integer");
    return d;
}

std::vector<double> SectionReader::get_doubles(const std::string& key,
                                               std::vector<double> fallback) const {
    const auto v = find(key);
    if (!v) return fallback;
    std::vector<double> out;
    std::size_t pos = 0;
    while (pos <= v->size()) {
        std::size_t end = v->find(',', pos);
        if (end == std::string::npos) end = v->size();
        const std::string item = strip(v->substr(pos, end - pos));
        if (!item.empty()) {
            char* e = nullptr;
            const double d = std::strtod(item.c_str(), &e);
            if (e == item.c_str() || *e != '\0')
                throw ConfigError("config: key '" + key + "' has a non-numeric entry");
            out.push_back(d);
        }
        pos = end + 1;
        if (end == v->size()) break;
    }
    if (out.empty()) throw ConfigError("config: key '" + key + "' is empty");
    return out;
}

}  // namespace gwlab

#include "liouville/config.hpp"

#include <cctype>
#include <cerrno>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "liouville/rational.hpp"

namespace liouville {

namespace {

std::string trim(const std::string& s) {
    std::size_t lo = 0, hi = s.size();
    while (lo < hi && std::isspace(static_cast<unsigned char>(s[lo]))) ++lo;
    while (hi > lo && std::isspace(static_cast<unsigned char>(s[hi - 1]))) --hi;
    return s.substr(lo, hi - lo);
}

bool valid_key(const std::string& k) {
    if (k.empty()) return false;
    for (char c : k)
        if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.' ||
              c == '-'))
            return false;
    return true;
}

}  // namespace

double parse_double_strict(const std::string& text, const std::string& what) {
    const std::string t = trim(text);
    try {
        return to_double(rational_from_decimal(t));
    } catch (const UsageError&) {
        throw UsageError(what + ": not a decimal number: '" + text + "'");
    }
}

long parse_long_strict(const std::string& text, const std::string& what) {
    const std::string t = trim(text);
    if (t.empty()) throw UsageError(what + ": empty integer");
    errno = 0;
    char* end = nullptr;
    const long v = std::strtol(t.c_str(), &end, 10);
    if (errno != 0 || end == t.c_str() || *end != '\0')
        throw UsageError(what + ": not an integer: '" + text + "'");
    return v;
}

bool parse_bool_strict(const std::string& text, const std::string& what) {
    std::string t = trim(text);
    for (char& ch : t) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
    if (t == "true" || t == "1" || t == "yes" || t == "on") return true;
    if (t == "false" || t == "0" || t == "no" || t == "off") return false;
    throw UsageError(what + ": not a boolean: '" + text + "'");
}

ExperimentConfig ExperimentConfig::parse(const std::string& text) {
    ExperimentConfig cfg;
    std::istringstream in(text);
    std::string line;
    long line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        const std::size_t eq = t.find('=');
        if (eq == std::string::npos)
            throw UsageError("config line " + std::to_string(line_no) +
                             ": expected `key = value`");
        const std::string key = trim(t.substr(0, eq));
        const std::string value = trim(t.substr(eq + 1));
        if (!valid_key(key))
            throw UsageError("config line " + std::to_string(line_no) + ": bad key '" +
                             key + "'");
        cfg.entries_.emplace_back(key, value);
    }
    return cfg;
}

ExperimentConfig ExperimentConfig::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot open config file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse(buf.str());
}

bool ExperimentConfig::has(const std::string& key) const {
    for (const auto& [k, v] : entries_)
        if (k == key) return true;
    return false;
}

long ExperimentConfig::count(const std::string& key) const {
    long n = 0;
    for (const auto& [k, v] : entries_)
        if (k == key) ++n;
    return n;
}

void ExperimentConfig::touch(const std::string& key) const { consumed_.insert(key); }

std::string ExperimentConfig::get_string(const std::string& key) const {
    touch(key);
    const std::string* found = nullptr;
    for (const auto& [k, v] : entries_)
        if (k == key) {
            if (found) throw UsageError("config key repeated: " + key);
            found = &v;
        }
    if (!found) throw UsageError("config key missing: " + key);
    return *found;
}

double ExperimentConfig::get_double(const std::string& key) const {
    return parse_double_strict(get_string(key), "config key " + key);
}

long ExperimentConfig::get_long(const std::string& key) const {
    return parse_long_strict(get_string(key), "config key " + key);
}

bool ExperimentConfig::get_bool(const std::string& key) const {
    return parse_bool_strict(get_string(key), "config key " + key);
}

std::vector<std::string> ExperimentConfig::get_string_list(const std::string& key) const {
    touch(key);
    std::vector<std::string> out;
    for (const auto& [k, v] : entries_)
        if (k == key) out.push_back(v);
    return out;
}

std::vector<double> ExperimentConfig::get_double_list(const std::string& key) const {
    std::vector<double> out;
    for (const std::string& s : get_string_list(key))
        out.push_back(parse_double_strict(s, "config key " + key));
    return out;
}

std::vector<long> ExperimentConfig::get_long_list(const std::string& key) const {
    std::vector<long> out;
    for (const std::string& s : get_string_list(key))
        out.push_back(parse_long_strict(s, "config key " + key));
    return out;
}

void ExperimentConfig::append(const std::string& key, const std::string& value) {
    if (!valid_key(key)) throw UsageError("bad config key '" + key + "'");
    entries_.emplace_back(key, value);
}

std::string ExperimentConfig::serialize() const {
    std::string out;
    for (const auto& [k, v] : entries_) {
        out += k;
        out += " = ";
        out += v;
        out += '\n';
    }
    return out;
}

std::vector<std::string> ExperimentConfig::unconsumed_keys() const {
    std::vector<std::string> out;
    std::set<std::string> seen;
    for (const auto& [k, v] : entries_)
        if (!consumed_.count(k) && seen.insert(k).second) out.push_back(k);
    return out;
}

}  // namespace liouville

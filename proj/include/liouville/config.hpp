#pragma once

// Flat key = value experiment configuration. Repeated keys form lists
// (order preserved); values are kept verbatim as strings and converted on
// access, with reals going through the exact decimal parser so a config
// re-serialized and re-read binds to bit-identical numbers. Unknown keys
// are detected by consumption tracking: every key the consumer understands
// gets touched, and leftovers are rejected.

#include <set>
#include <string>
#include <utility>
#include <vector>

namespace liouville {

class ExperimentConfig {
  public:
    ExperimentConfig() = default;

    // Lines of the form `key = value` (spaces optional); blank lines and
    // lines starting with # are ignored. Keys: [A-Za-z0-9_.-]+.
    static ExperimentConfig parse(const std::string& text);
    static ExperimentConfig load(const std::string& path);

    bool has(const std::string& key) const;
    long count(const std::string& key) const;
    void touch(const std::string& key) const;  // mark consumed without reading

    // Single-value accessors; missing or repeated keys raise UsageError.
    std::string get_string(const std::string& key) const;
    double get_double(const std::string& key) const;
    long get_long(const std::string& key) const;
    bool get_bool(const std::string& key) const;

    // List accessors return every occurrence in file order (possibly none).
    std::vector<std::string> get_string_list(const std::string& key) const;
    std::vector<double> get_double_list(const std::string& key) const;
    std::vector<long> get_long_list(const std::string& key) const;

    void append(const std::string& key, const std::string& value);

    // Canonical text: `key = value` lines in insertion order; parse of the
    // result reproduces the entries exactly (round-trip identity).
    std::string serialize() const;

    const std::vector<std::pair<std::string, std::string>>& entries() const {
        return entries_;
    }

    // Keys never touched by any accessor: the consumer rejects these.
    std::vector<std::string> unconsumed_keys() const;

  private:
    std::vector<std::pair<std::string, std::string>> entries_;
    mutable std::set<std::string> consumed_;
};

// Conversions shared with the CLI: strict parsers that reject trailing
// garbage. Reals go through the exact decimal-string route.
double parse_double_strict(const std::string& text, const std::string& what);
long parse_long_strict(const std::string& text, const std::string& what);
bool parse_bool_strict(const std::string& text, const std::string& what);

}  // namespace liouville

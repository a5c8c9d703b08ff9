#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

namespace occflow {

// Flat `key = value` configuration file. `#` starts a comment, blank lines
// are skipped. Keys are schema-checked by the consumer: any key outside the
// allowed set is rejected before computation starts.
class KeyFile {
public:
    static KeyFile parse_file(const std::string& path);
    static KeyFile parse_string(const std::string& text);

    bool has(const std::string& key) const;
    std::string get_string(const std::string& key) const;
    std::string get_string(const std::string& key, const std::string& fallback) const;
    double get_double(const std::string& key) const;
    double get_double(const std::string& key, double fallback) const;
    long long get_int(const std::string& key) const;
    long long get_int(const std::string& key, long long fallback) const;
    bool get_bool(const std::string& key, bool fallback) const;

    void reject_unknown_keys(const std::set<std::string>& allowed) const;

    const std::map<std::string, std::string>& entries() const { return values_; }

private:
    std::map<std::string, std::string> values_;
};

}  // namespace occflow

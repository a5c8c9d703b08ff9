#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace occflow {

// CSV artifact with `# occflow <version> seed=... config_hash=...` header
// comments. Every effective numeric setting is echoed so no default stays
// silent; cell values are formatted deterministically.
class CsvWriter {
public:
    CsvWriter(std::string version, std::uint64_t seed, std::uint64_t config_hash);

    void set_comment(const std::string& key, const std::string& value);
    void set_comment(const std::string& key, double value);
    void set_columns(std::vector<std::string> names);
    void add_row(const std::vector<double>& cells);
    void add_row_mixed(const std::vector<std::string>& cells);

    std::string str() const;
    void write_file(const std::string& path) const;

private:
    std::string version_;
    std::uint64_t seed_;
    std::uint64_t hash_;
    std::vector<std::pair<std::string, std::string>> comments_;
    std::vector<std::string> columns_;
    std::vector<std::string> rows_;
};

std::string format_double(double v);

// FNV-1a over the canonical "key=value\n" listing of a configuration.
std::uint64_t config_hash(const std::vector<std::pair<std::string, std::string>>& entries);

}  // namespace occflow

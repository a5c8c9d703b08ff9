#include "occflow/csv.hpp"

#include "occflow/errors.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace occflow {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

std::uint64_t config_hash(const std::vector<std::pair<std::string, std::string>>& entries) {
    std::uint64_t h = 1469598103934665603ull;
    auto feed = [&h](const std::string& s) {
        for (unsigned char c : s) {
            h ^= c;
            h *= 1099511628211ull;
        }
    };
    for (const auto& [k, v] : entries) {
        feed(k);
        feed("=");
        feed(v);
        feed("\n");
    }
    return h;
}

CsvWriter::CsvWriter(std::string version, std::uint64_t seed, std::uint64_t hash)
    : version_(std::move(version)), seed_(seed), hash_(hash) {}

void CsvWriter::set_comment(const std::string& key, const std::string& value) {
    comments_.emplace_back(key, value);
}

void CsvWriter::set_comment(const std::string& key, double value) {
    comments_.emplace_back(key, format_double(value));
}

void CsvWriter::set_columns(std::vector<std::string> names) { columns_ = std::move(names); }

void CsvWriter::add_row(const std::vector<double>& cells) {
    std::string line;
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) line += ',';
        line += format_double(cells[i]);
    }
    rows_.push_back(std::move(line));
}

void CsvWriter::add_row_mixed(const std::vector<std::string>& cells) {
    std::string line;
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) line += ',';
        line += cells[i];
    }
    rows_.push_back(std::move(line));
}

std::string CsvWriter::str() const {
    std::ostringstream os;
    char head[96];
    std::snprintf(head, sizeof(head), "# occflow %s seed=%llu config_hash=%016llx\n",
                  version_.c_str(), static_cast<unsigned long long>(seed_),
                  static_cast<unsigned long long>(hash_));
    os << head;
    for (const auto& [k, v] : comments_) os << "# " << k << "=" << v << "\n";
    if (!columns_.empty()) {
        for (std::size_t i = 0; i < columns_.size(); ++i) os << (i ? "," : "") << columns_[i];
        os << "\n";
    }
    for (const std::string& r : rows_) os << r << "\n";
    return os.str();
}

void CsvWriter::write_file(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw config_error("CsvWriter: cannot open " + path);
    out << str();
}

}  // namespace occflow

#include "tvarbias/loss_data.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <optional>
#include <sstream>

namespace tvarbias {
namespace {

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string::npos) return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

std::optional<double> parse_number(const std::string& field) {
    std::string t = trim(field);
    if (t.empty()) return std::nullopt;
    if (t.front() == '+') t.erase(0, 1);
    double v = 0.0;
    const auto res = std::from_chars(t.data(), t.data() + t.size(), v);
    if (res.ec != std::errc{} || res.ptr != t.data() + t.size()) return std::nullopt;
    return v;
}

std::optional<std::size_t> parse_index(const std::string& s) {
    std::size_t v = 0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc{} || res.ptr != s.data() + s.size()) return std::nullopt;
    return v;
}

std::string list_lines(const std::vector<std::size_t>& lines) {
    std::ostringstream out;
    const std::size_t shown = std::min<std::size_t>(lines.size(), 10);
    for (std::size_t i = 0; i < shown; ++i) out << (i ? ", " : "") << lines[i];
    if (lines.size() > shown) out << " and " << lines.size() - shown << " more";
    return out.str();
}

}  // namespace

std::vector<std::string> split_record(const std::string& line, char delimiter) {
    std::vector<std::string> fields;
    std::string current;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    current += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                current += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == delimiter) {
            fields.push_back(std::move(current));
            current.clear();
        } else {
            current += c;
        }
    }
    fields.push_back(std::move(current));
    return fields;
}

std::vector<double> read_loss_column(std::istream& in, const LossColumnOptions& options,
                                     const std::string& source) {
    std::vector<std::pair<std::size_t, std::vector<std::string>>> records;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line_no == 1 && line.rfind("\xEF\xBB\xBF", 0) == 0) line.erase(0, 3);
        if (trim(line).empty()) continue;
        records.emplace_back(line_no, split_record(line, options.delimiter));
    }
    if (records.empty()) throw DataError(source + ": file contains no data");

    const auto index = parse_index(options.column);
    bool has_header = options.header == HeaderMode::present;
    if (options.header == HeaderMode::automatic) {
        if (!options.column.empty() && !index) {
            has_header = true;
        } else {
            const auto& first = records.front().second;
            const std::size_t col = index.value_or(0);
            has_header = col < first.size() && !parse_number(first[col]);
        }
    }

    std::size_t col = 0;
    if (!options.column.empty()) {
        if (index) {
            col = *index;
        } else {
            if (!has_header) {
                throw DataError(source + ": column '" + options.column +
                                "' selected by name but the file has no header");
            }
            const auto& names = records.front().second;
            std::size_t k = 0;
            while (k < names.size() && trim(names[k]) != options.column) ++k;
            if (k == names.size()) {
                throw DataError(source + ": no column named '" + options.column + "'");
            }
            col = k;
        }
    }

    std::vector<double> values;
    std::vector<std::size_t> bad;
    for (std::size_t r = has_header ? 1 : 0; r < records.size(); ++r) {
        const auto& [no, fields] = records[r];
        std::optional<double> v;
        if (col < fields.size()) v = parse_number(fields[col]);
        if (!v || !std::isfinite(*v)) {
            bad.push_back(no);
            continue;
        }
        values.push_back(*v);
    }
    if (!bad.empty()) {
        throw DataError(source + ": non-numeric or missing value in column " +
                        std::to_string(col) + " at line(s) " + list_lines(bad));
    }
    if (values.empty()) throw DataError(source + ": file contains a header but no data rows");
    return values;
}

std::vector<double> read_loss_file(const std::string& path, const LossColumnOptions& options) {
    std::ifstream in(path);
    if (!in) throw DataError(path + ": cannot open file");
    return read_loss_column(in, options, path);
}

}  // namespace tvarbias

#include "ingest.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <fstream>

#include "cpmc/errors.hpp"

namespace cpmc::cli {

namespace {

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> fields;
    std::string current;
    for (char c : line) {
        if (c == ',' || c == '\t' || std::isspace(static_cast<unsigned char>(c))) {
            if (!current.empty()) {
                fields.push_back(current);
                current.clear();
            }
            continue;
        }
        current.push_back(c);
    }
    if (!current.empty()) fields.push_back(current);
    return fields;
}

bool parse_number(const std::string& field, double* out) {
    const char* begin = field.c_str();
    char* end = nullptr;
    const double v = std::strtod(begin, &end);
    if (end != begin + field.size()) return false;
    *out = v;
    return true;
}

bool is_index_spec(const std::string& column) {
    return !column.empty() &&
           std::all_of(column.begin(), column.end(),
                       [](unsigned char c) { return std::isdigit(c); });
}

}  // namespace

std::vector<double> ingest(const std::string& path, const std::string& column) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open input file: " + path);

    const bool by_name = !column.empty() && !is_index_spec(column);
    std::size_t index = by_name ? 0 : (column.empty() ? 0 : std::stoul(column));

    std::vector<double> values;
    std::string line;
    std::size_t row = 0;
    bool saw_data = false;
    while (std::getline(in, line)) {
        ++row;
        const auto fields = split_fields(line);
        if (fields.empty()) continue;  // blank line

        if (!saw_data && by_name) {
            const auto it = std::find(fields.begin(), fields.end(), column);
            if (it == fields.end())
                throw DataError("column '" + column + "' not found in header of " + path);
            index = static_cast<std::size_t>(it - fields.begin());
            saw_data = true;
            continue;
        }

        if (index >= fields.size())
            throw DataError("row " + std::to_string(row) + ": no column " +
                            std::to_string(index));
        double v = 0.0;
        if (!parse_number(fields[index], &v)) {
            // Allow a single header row when selecting by index.
            if (!saw_data && values.empty()) {
                saw_data = true;
                continue;
            }
            throw DataError("row " + std::to_string(row) + ": cannot parse '" +
                            fields[index] + "' as a number");
        }
        saw_data = true;
        if (!std::isfinite(v))
            throw DataError("row " + std::to_string(row) + ": non-finite observation");
        values.push_back(v);
    }
    if (values.empty()) throw DataError("no observations found in " + path);
    return values;
}

}  // namespace cpmc::cli

#include "subflow/csv_io.hpp"
#include "subflow/errors.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>

namespace subflow::io {

std::string format_g17(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

void write_csv(std::ostream& os, const Metadata& meta,
               const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& columns) {
    if (columns.size() != header.size())
        throw ValidationError("write_csv: header and column counts differ");
    for (const auto& c : columns)
        if (c.size() != columns.front().size())
            throw ValidationError("write_csv: ragged columns");

    for (const auto& [key, value] : meta)
        os << "# " << key << "=" << value << "\n";
    for (std::size_t j = 0; j < header.size(); ++j)
        os << header[j] << (j + 1 < header.size() ? "," : "\n");
    const std::size_t rows = columns.empty() ? 0 : columns.front().size();
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < columns.size(); ++j)
            os << format_g17(columns[j][i]) << (j + 1 < columns.size() ? "," : "\n");
}

std::vector<std::vector<double>> read_csv_columns(const std::string& path,
                                                  std::vector<std::string>* header) {
    std::ifstream in(path);
    if (!in)
        throw ValidationError("read_csv_columns: cannot open " + path);

    std::vector<std::vector<double>> columns;
    std::string line;
    int lineno = 0;
    bool header_seen = false;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty())
            continue;
        if (line[0] == '#')
            continue;
        std::vector<std::string> fields;
        std::size_t pos = 0;
        while (true) {
            const auto comma = line.find(',', pos);
            fields.push_back(line.substr(pos, comma - pos));
            if (comma == std::string::npos)
                break;
            pos = comma + 1;
        }
        if (!header_seen) {
            if (header)
                *header = fields;
            columns.resize(fields.size());
            header_seen = true;
            continue;
        }
        if (fields.size() != columns.size())
            throw ParseError("row width does not match header", lineno);
        for (std::size_t j = 0; j < fields.size(); ++j) {
            char* end = nullptr;
            const double v = std::strtod(fields[j].c_str(), &end);
            if (end == fields[j].c_str() || *end != '\0')
                throw ParseError("malformed number '" + fields[j] + "'", lineno);
            columns[j].push_back(v);
        }
    }
    if (!header_seen)
        throw ParseError("missing header row", lineno);
    return columns;
}

} // namespace subflow::io

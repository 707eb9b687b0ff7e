#pragma once

#include <string>
#include <vector>

namespace fklab {

/// A flat table: '#' comment lines, one header line, comma-separated rows.
struct CsvTable {
    std::vector<std::string> comments;  ///< without the leading '#'
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    std::size_t column(const std::string& name) const;
    double number(std::size_t row, const std::string& name) const;
};

/// %.17g, which strtod reads back to the same double.
std::string format_double(double v);

std::string to_csv(const CsvTable& t);
CsvTable parse_csv(const std::string& text);

void write_csv(const std::string& path, const CsvTable& t);
CsvTable read_csv(const std::string& path);

} // namespace fklab

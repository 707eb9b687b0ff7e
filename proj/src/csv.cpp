#include "fklab/csv.hpp"

#include "fklab/errors.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace fklab {

namespace {

std::vector<std::string> split(const std::string& line)
{
    std::vector<std::string> out;
    std::string cell;
    std::stringstream ss(line);
    while (std::getline(ss, cell, ','))
        out.push_back(cell);
    if (!line.empty() && line.back() == ',')
        out.emplace_back();
    return out;
}

} // namespace

std::size_t CsvTable::column(const std::string& name) const
{
    for (std::size_t i = 0; i < header.size(); ++i)
        if (header[i] == name)
            return i;
    throw DomainError("csv: no column named " + name);
}

double CsvTable::number(std::size_t row, const std::string& name) const
{
    const std::string& cell = rows.at(row).at(column(name));
    char* end = nullptr;
    const double v = std::strtod(cell.c_str(), &end);
    if (end == cell.c_str() || *end != '\0')
        throw DomainError("csv: '" + cell + "' is not a number");
    return v;
}

std::string format_double(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string to_csv(const CsvTable& t)
{
    std::string out;
    for (const auto& c : t.comments)
        out += "#" + c + "\n";
    auto line = [&](const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i)
                out += ',';
            out += cells[i];
        }
        out += '\n';
    };
    line(t.header);
    for (const auto& r : t.rows)
        line(r);
    return out;
}

CsvTable parse_csv(const std::string& text)
{
    CsvTable t;
    std::istringstream in(text);
    std::string line;
    bool have_header = false;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        if (line.empty())
            continue;
        if (line[0] == '#') {
            t.comments.push_back(line.substr(1));
            continue;
        }
        if (!have_header) {
            t.header = split(line);
            have_header = true;
            continue;
        }
        auto cells = split(line);
        if (cells.size() != t.header.size())
            throw DomainError("csv: row width differs from the header");
        t.rows.push_back(std::move(cells));
    }
    return t;
}

void write_csv(const std::string& path, const CsvTable& t)
{
    std::ofstream f(path, std::ios::binary);
    if (!f)
        throw ConfigError("cannot write " + path);
    f << to_csv(t);
}

CsvTable read_csv(const std::string& path)
{
    std::ifstream f(path, std::ios::binary);
    if (!f)
        throw ConfigError("cannot read " + path);
    std::stringstream ss;
    ss << f.rdbuf();
    return parse_csv(ss.str());
}

} // namespace fklab

#include "epinet/csv.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "epinet/error.hpp"

namespace epinet {

std::string format_number(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string format_csv(const CsvTable &table)
{
    std::string out;
    for (std::size_t c = 0; c < table.header.size(); ++c)
        out += (c ? "," : "") + table.header[c];
    out += '\n';
    for (const auto &row : table.rows) {
        for (std::size_t c = 0; c < row.size(); ++c) {
            if (c)
                out += ',';
            out += format_number(row[c]);
        }
        out += '\n';
    }
    return out;
}

namespace {

std::vector<std::string> split(const std::string &line)
{
    std::vector<std::string> cells;
    std::string cell;
    std::stringstream ss(line);
    while (std::getline(ss, cell, ','))
        cells.push_back(cell);
    if (!line.empty() && line.back() == ',')
        cells.emplace_back();
    return cells;
}

} // namespace

CsvTable parse_csv(std::istream &in)
{
    CsvTable table;
    std::string line;
    int no = 0;
    while (std::getline(in, line)) {
        ++no;
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        if (no == 1) {
            table.header = split(line);
            if (table.header.empty())
                throw ParseError("empty header", no, 1);
            continue;
        }
        if (line.empty())
            continue;
        const auto cells = split(line);
        if (cells.size() != table.header.size())
            throw ParseError("expected " + std::to_string(table.header.size()) + " columns, found " +
                                 std::to_string(cells.size()),
                             no, 1);
        std::vector<double> row;
        for (std::size_t c = 0; c < cells.size(); ++c) {
            char *end = nullptr;
            const double v = std::strtod(cells[c].c_str(), &end);
            if (cells[c].empty() || *end != '\0')
                throw ParseError("not a number: '" + cells[c] + "'", no, static_cast<int>(c + 1));
            row.push_back(v);
        }
        table.rows.push_back(std::move(row));
    }
    if (table.header.empty())
        throw ParseError("empty file", 1, 1);
    return table;
}

CsvTable read_csv(const std::filesystem::path &path)
{
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot open '" + path.string() + "'");
    try {
        return parse_csv(in);
    } catch (const ParseError &err) {
        throw ParseError(path.string() + ": " + err.what(), err.line(), err.column());
    }
}

CompareReport compare_tables(const CsvTable &a, const CsvTable &b, double tolerance)
{
    if (a.header != b.header)
        throw DimensionError("column schemas differ");
    if (a.rows.size() != b.rows.size())
        throw DimensionError("time grids differ in length (" + std::to_string(a.rows.size()) + " vs " +
                             std::to_string(b.rows.size()) + " rows)");
    for (std::size_t r = 0; r < a.rows.size(); ++r) {
        const double ta = a.rows[r].front();
        const double tb = b.rows[r].front();
        if (std::abs(ta - tb) > 1e-12 * std::max(1.0, std::abs(ta)))
            throw DimensionError("time grids differ at row " + std::to_string(r + 1));
    }
    CompareReport report;
    report.tolerance = tolerance;
    for (std::size_t c = 1; c < a.header.size(); ++c) {
        ColumnDeviation dev{a.header[c], 0.0, true};
        for (std::size_t r = 0; r < a.rows.size(); ++r) {
            const double d = std::abs(a.rows[r][c] - b.rows[r][c]);
            // NaN compares false, so it is tracked explicitly.
            if (std::isnan(d))
                dev.max_abs_deviation = d;
            else if (!std::isnan(dev.max_abs_deviation))
                dev.max_abs_deviation = std::max(dev.max_abs_deviation, d);
        }
        dev.pass = dev.max_abs_deviation <= tolerance;
        report.pass = report.pass && dev.pass;
        report.columns.push_back(dev);
    }
    return report;
}

} // namespace epinet

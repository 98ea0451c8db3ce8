#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace epinet {

/// Numeric table with a one-line header, as written for trajectories.
struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;
};

/// Shortest round-trip text for a double (17 significant digits).
std::string format_number(double v);

/// Header line, then one line per row, values in format_number form.
std::string format_csv(const CsvTable &table);

/// Throws ParseError on ragged rows or non-numeric cells.
CsvTable parse_csv(std::istream &in);
CsvTable read_csv(const std::filesystem::path &path);

struct ColumnDeviation {
    std::string column;
    double max_abs_deviation = 0.0;
    bool pass = true;
};

struct CompareReport {
    std::vector<ColumnDeviation> columns;
    double tolerance = 0.0;
    bool pass = true;
};

/// Per-column maximum absolute deviation of every column but the first
/// (time). Throws DimensionError when the headers, row counts or time
/// columns differ.
CompareReport compare_tables(const CsvTable &a, const CsvTable &b, double tolerance);

} // namespace epinet

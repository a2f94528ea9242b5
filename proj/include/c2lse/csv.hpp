#pragma once

#include <string>
#include <vector>

#include "c2lse/types.hpp"

namespace c2lse {

/// A parsed CSV file: one header row, then data rows of equal width.
struct CsvTable {
    std::string path;
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    Index row_count() const { return static_cast<Index>(rows.size()); }

    /// Index of a named column; unknown names raise with the available set.
    Index column_index(const std::string& name) const;

    /// Numeric cell value; a non-numeric cell raises naming the row, column
    /// and offending text. Row/column positions in messages are 1-based with
    /// the header as row 1.
    double numeric(Index row, Index col) const;
};

CsvTable read_csv(const std::string& path);

/// Shortest decimal form that round-trips the double exactly.
std::string format_double(double v);

/// Join cells with commas; no quoting (the emitters never produce commas in cells).
std::string csv_line(const std::vector<std::string>& cells);

}  // namespace c2lse

#include "c2lse/csv.hpp"

#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace c2lse {

namespace {

std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream in(line);
    while (std::getline(in, cell, ',')) {
        // trim surrounding whitespace
        const auto first = cell.find_first_not_of(" \t\r");
        const auto last = cell.find_last_not_of(" \t\r");
        cells.push_back(first == std::string::npos ? "" : cell.substr(first, last - first + 1));
    }
    if (!line.empty() && line.back() == ',') cells.push_back("");
    return cells;
}

}  // namespace

Index CsvTable::column_index(const std::string& name) const {
    for (std::size_t i = 0; i < header.size(); ++i)
        if (header[i] == name) return static_cast<Index>(i);
    std::string available;
    for (const auto& h : header) available += (available.empty() ? "" : ", ") + h;
    throw std::runtime_error("'" + path + "': no column named '" + name + "' (columns: " +
                             available + ")");
}

double CsvTable::numeric(Index row, Index col) const {
    const std::string& text = rows[static_cast<std::size_t>(row)][static_cast<std::size_t>(col)];
    errno = 0;
    char* end = nullptr;
    const double v = std::strtod(text.c_str(), &end);
    if (end == text.c_str() || *end != '\0' || errno == ERANGE) {
        std::ostringstream msg;
        msg << "'" << path << "': row " << (row + 2) << ", column " << (col + 1) << " ('"
            << header[static_cast<std::size_t>(col)] << "'): cannot parse '" << text
            << "' as a number";
        throw std::runtime_error(msg.str());
    }
    return v;
}

CsvTable read_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open '" + path + "'");
    CsvTable table;
    table.path = path;
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("'" + path + "': file is empty");
    table.header = split_line(line);
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        auto cells = split_line(line);
        if (cells.size() != table.header.size()) {
            std::ostringstream msg;
            msg << "'" << path << "': row " << line_no << " has " << cells.size()
                << " cells, expected " << table.header.size();
            throw std::runtime_error(msg.str());
        }
        table.rows.push_back(std::move(cells));
    }
    return table;
}

std::string format_double(double v) {
    char buf[40];
    for (int prec = 1; prec <= 17; ++prec) {
        std::snprintf(buf, sizeof buf, "%.*g", prec, v);
        if (std::strtod(buf, nullptr) == v) break;
    }
    return buf;
}

std::string csv_line(const std::vector<std::string>& cells) {
    std::string line;
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) line += ',';
        line += cells[i];
    }
    return line;
}

}  // namespace c2lse

#include "oseentp/csv.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace oseentp {

std::string format_double(double x) {
    if (x == 0.0) return "0";  // merge the two signed zeros
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

void CsvTable::add_row(std::vector<std::string> row) {
    if (row.size() != header.size())
        throw std::invalid_argument("CsvTable: row width " + std::to_string(row.size()) +
                                    " does not match header width " +
                                    std::to_string(header.size()));
    rows.push_back(std::move(row));
}

std::size_t CsvTable::column(const std::string& name) const {
    for (std::size_t i = 0; i < header.size(); ++i)
        if (header[i] == name) return i;
    throw std::out_of_range("CsvTable: no column \"" + name + "\"");
}

namespace {

void check_field(const std::string& f) {
    for (char c : f)
        if (c == ',' || c == '"' || c == '\n' || c == '\r')
            throw std::invalid_argument("write_csv: field \"" + f +
                                        "\" contains a separator or line break");
}

void write_line(std::ostream& out, const std::vector<std::string>& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
        check_field(fields[i]);
        if (i) out << ',';
        out << fields[i];
    }
    out << '\n';
}

}  // namespace

void write_csv(const std::string& path, const CsvTable& table) {
    if (table.header.empty()) throw std::invalid_argument("write_csv: empty header");
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("write_csv: cannot open " + path + " for writing");
    write_line(out, table.header);
    for (const auto& row : table.rows) {
        if (row.size() != table.header.size())
            throw std::invalid_argument("write_csv: ragged row in " + path);
        write_line(out, row);
    }
    if (!out) throw std::runtime_error("write_csv: write failed for " + path);
}

CsvTable read_csv(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("read_csv: cannot open " + path);
    CsvTable table;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        std::vector<std::string> fields;
        std::string field;
        std::istringstream ls(line);
        while (std::getline(ls, field, ',')) fields.push_back(field);
        if (line.empty() || line.back() == ',') fields.push_back("");
        if (table.header.empty()) {
            table.header = std::move(fields);
        } else {
            if (fields.size() != table.header.size())
                throw std::runtime_error("read_csv: ragged row in " + path);
            table.rows.push_back(std::move(fields));
        }
    }
    if (table.header.empty()) throw std::runtime_error("read_csv: " + path + " is empty");
    return table;
}

}  // namespace oseentp

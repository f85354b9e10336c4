#pragma once

#include <string>
#include <vector>

// Fixed CSV dialect shared by every artifact the CLI emits: comma separator,
// '.' decimal point, one header row, LF line endings, floats at 17
// significant digits so rereading reproduces the double exactly.

namespace oseentp {

std::string format_double(double x);

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    // Row width must match the header.
    void add_row(std::vector<std::string> row);

    // Column index by name; throws std::out_of_range if absent.
    std::size_t column(const std::string& name) const;
};

// Fields must not contain separators, quotes, or line breaks; the writer
// rejects them instead of quoting (no consumer of ours parses quotes).
void write_csv(const std::string& path, const CsvTable& table);

CsvTable read_csv(const std::string& path);

}  // namespace oseentp

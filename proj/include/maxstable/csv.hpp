#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "maxstable/types.hpp"

namespace maxstable {

// Shortest 17-significant-digit decimal form; round-trips any double.
std::string format_g17(double v);

// RFC-style quoting: fields holding commas, quotes or newlines get wrapped,
// embedded quotes doubled.
std::string csv_quote(const std::string& field);

struct CsvTable {
  std::vector<std::string> columns;
  Mat data;
};

// Writes '#'-prefixed comment lines, a header row, then numeric rows at 17
// significant digits.
void write_csv(std::ostream& out, const std::vector<std::string>& comments,
               const std::vector<std::string>& columns, const Mat& data);

// Reads a numeric CSV: '#' comment lines skipped, first real line is the
// header. Throws SpecError on malformed input.
CsvTable read_csv(std::istream& in);
CsvTable read_csv_file(const std::string& path);

}  // namespace maxstable

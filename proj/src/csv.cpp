#include "maxstable/csv.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <ostream>
#include <sstream>

namespace maxstable {

std::string format_g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string csv_quote(const std::string& field) {
  if (field.find_first_of(",\"\n\r") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

void write_csv(std::ostream& out, const std::vector<std::string>& comments,
               const std::vector<std::string>& columns, const Mat& data) {
  for (const auto& c : comments) out << "# " << c << "\n";
  for (std::size_t j = 0; j < columns.size(); ++j) {
    if (j) out << ",";
    out << csv_quote(columns[j]);
  }
  out << "\n";
  for (Eigen::Index i = 0; i < data.rows(); ++i) {
    for (Eigen::Index j = 0; j < data.cols(); ++j) {
      if (j) out << ",";
      out << format_g17(data(i, j));
    }
    out << "\n";
  }
}

namespace {

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cur += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(cur);
      cur.clear();
    } else if (c == '\r') {
      // tolerate CRLF
    } else {
      cur += c;
    }
  }
  fields.push_back(cur);
  return fields;
}

}  // namespace

CsvTable read_csv(std::istream& in) {
  CsvTable table;
  std::string line;
  std::vector<std::vector<double>> rows;
  bool have_header = false;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    const auto fields = split_fields(line);
    if (!have_header) {
      table.columns = fields;
      have_header = true;
      continue;
    }
    if (fields.size() != table.columns.size())
      throw SpecError("csv: row with " + std::to_string(fields.size()) +
                      " fields, header has " +
                      std::to_string(table.columns.size()));
    std::vector<double> row;
    row.reserve(fields.size());
    for (const auto& f : fields) {
      char* end = nullptr;
      const double v = std::strtod(f.c_str(), &end);
      if (end == f.c_str() || *end != '\0')
        throw SpecError("csv: non-numeric field \"" + f + "\"");
      row.push_back(v);
    }
    rows.push_back(std::move(row));
  }
  if (!have_header) throw SpecError("csv: missing header row");
  table.data = Mat(static_cast<Eigen::Index>(rows.size()),
                   static_cast<Eigen::Index>(table.columns.size()));
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < rows[i].size(); ++j)
      table.data(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          rows[i][j];
  return table;
}

CsvTable read_csv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SpecError("cannot open csv file: " + path);
  return read_csv(in);
}

}  // namespace maxstable

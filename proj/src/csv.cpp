#include "mshom/csv.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "mshom/error.hpp"

namespace mshom {

std::string csv_format(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

CsvWriter::CsvWriter(const std::string& path, const std::string& header) : path_(path) {
  buffer_ = header + "\n";
  columns_ = 1;
  for (char c : header)
    if (c == ',') ++columns_;
}

void CsvWriter::row(const std::vector<double>& values) {
  if (values.size() != columns_)
    throw NumericError("csv row width " + std::to_string(values.size()) +
                       " does not match header of " + path_);
  std::string line;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) line += ",";
    line += csv_format(values[i]);
  }
  buffer_ += line + "\n";
}

void CsvWriter::raw_row(const std::string& line) { buffer_ += line + "\n"; }

void csv_flush(CsvWriter& w) {
  std::ofstream out(w.path_, std::ios::binary);
  if (!out) throw NumericError("cannot write " + w.path_);
  out << w.buffer_;
}

CsvTable read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open csv file '" + path + "'");
  CsvTable table;
  std::string line;
  if (!std::getline(in, line)) throw ConfigError("empty csv file '" + path + "'");
  {
    std::stringstream ss(line);
    std::string col;
    while (std::getline(ss, col, ',')) table.header.push_back(col);
  }
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string item;
    while (std::getline(ss, item, ',')) {
      try {
        row.push_back(std::stod(item));
      } catch (const std::exception&) {
        throw ConfigError("csv '" + path + "': cannot parse '" + item + "'");
      }
    }
    if (row.size() != table.header.size())
      throw ConfigError("csv '" + path + "': ragged row");
    table.rows.push_back(std::move(row));
  }
  return table;
}

}  // namespace mshom

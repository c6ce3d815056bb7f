#pragma once

// CSV output with deterministic number formatting (%.17g round-trips doubles
// bit-exactly), and a small reader used by the plotting code.

#include <string>
#include <vector>

namespace mshom {

class CsvWriter {
 public:
  CsvWriter(const std::string& path, const std::string& header);
  void row(const std::vector<double>& values);
  // mixed rows, e.g. integer indices next to doubles
  void raw_row(const std::string& line);
  const std::string& path() const { return path_; }

 private:
  std::string path_;
  std::string buffer_;
  std::size_t columns_ = 0;
  friend void csv_flush(CsvWriter& w);
};

// writes the accumulated rows to disk (single write keeps partial files out)
void csv_flush(CsvWriter& w);

std::string csv_format(double v);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};

// throws ConfigError when the file is missing or malformed
CsvTable read_csv(const std::string& path);

}  // namespace mshom

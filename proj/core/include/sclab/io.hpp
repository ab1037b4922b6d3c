#pragma once
// Config loading (JSON or flat key=value with [section] headers), CSV and
// JSON report output with byte-stable formatting.

#include <nlohmann/json.hpp>

#include <string>
#include <vector>

namespace sclab {
namespace io {

using json = nlohmann::json;

// Accepts a .json file or an INI-flavoured text file; sections become nested
// objects, values are parsed as numbers / bools / strings / comma lists.
json load_config(const std::string& path);

// Fixed "%.12g" formatting so reruns are byte-stable.
std::string format_double(double v);

struct CsvWriter {
  explicit CsvWriter(const std::string& path, const std::vector<std::string>& columns);
  ~CsvWriter();
  void row(const std::vector<std::string>& cells);
  std::string path;

 private:
  void* stream_ = nullptr;
};

void write_text(const std::string& path, const std::string& content);

} // namespace io
} // namespace sclab

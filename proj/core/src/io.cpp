#include "sclab/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace sclab {
namespace io {

namespace {
std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

json parse_scalar(const std::string& raw) {
  const std::string v = trim(raw);
  if (v == "true") return true;
  if (v == "false") return false;
  try {
    size_t pos = 0;
    double d = std::stod(v, &pos);
    if (pos == v.size()) {
      if (d == long(d) && v.find_first_of(".eE") == std::string::npos) return long(d);
      return d;
    }
  } catch (...) {
  }
  return v;
}
} // namespace

json load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("config not found: " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();
  // JSON if it parses as JSON
  try {
    return json::parse(text);
  } catch (...) {
  }
  json root = json::object();
  json* section = &root;
  std::istringstream lines(text);
  std::string line;
  while (std::getline(lines, line)) {
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#' || t[0] == ';') continue;
    if (t.front() == '[' && t.back() == ']') {
      const std::string name = trim(t.substr(1, t.size() - 2));
      root[name] = json::object();
      section = &root[name];
      continue;
    }
    const auto eq = t.find('=');
    if (eq == std::string::npos)
      throw std::runtime_error("config: cannot parse line '" + t + "'");
    const std::string key = trim(t.substr(0, eq));
    const std::string val = trim(t.substr(eq + 1));
    if (val.find(',') != std::string::npos) {
      json arr = json::array();
      std::istringstream parts(val);
      std::string item;
      while (std::getline(parts, item, ',')) arr.push_back(parse_scalar(item));
      (*section)[key] = arr;
    } else {
      (*section)[key] = parse_scalar(val);
    }
  }
  return root;
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

CsvWriter::CsvWriter(const std::string& p, const std::vector<std::string>& columns) : path(p) {
  FILE* f = std::fopen(p.c_str(), "w");
  if (!f) throw std::runtime_error("cannot open " + p);
  stream_ = f;
  std::string head;
  for (size_t i = 0; i < columns.size(); ++i) head += (i ? "," : "") + columns[i];
  std::fprintf(f, "%s\n", head.c_str());
}

CsvWriter::~CsvWriter() {
  if (stream_) std::fclose(static_cast<FILE*>(stream_));
}

void CsvWriter::row(const std::vector<std::string>& cells) {
  std::string line;
  for (size_t i = 0; i < cells.size(); ++i) {
    std::string c = cells[i];
    if (c.find(',') != std::string::npos || c.find('"') != std::string::npos) {
      std::string esc = "\"";
      for (char ch : c) {
        if (ch == '"') esc += "\"\"";
        else esc += ch;
      }
      esc += "\"";
      c = esc;
    }
    line += (i ? "," : "") + c;
  }
  std::fprintf(static_cast<FILE*>(stream_), "%s\n", line.c_str());
}

void write_text(const std::string& path, const std::string& content) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path);
  out << content;
}

} // namespace io
} // namespace sclab

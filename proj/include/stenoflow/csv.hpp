#pragma once
// Minimal CSV reading and writing: comma separated, header row, LF endings,
// reals printed with %.9e.

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace stenoflow::csv {

using Cell = std::variant<double, long, std::string>;

inline std::string format(const Cell& c) {
  if (const auto* d = std::get_if<double>(&c)) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.9e", *d);
    return buf;
  }
  if (const auto* l = std::get_if<long>(&c)) return std::to_string(*l);
  return std::get<std::string>(c);
}

class Writer {
 public:
  Writer(const std::string& path, const std::vector<std::string>& header)
      : out_(path, std::ios::binary), path_(path), width_(header.size()) {
    if (!out_) throw std::runtime_error("cannot write " + path);
    write_line(header);
  }

  void row(const std::vector<Cell>& cells) {
    if (cells.size() != width_)
      throw std::logic_error(path_ + ": row width does not match header");
    std::vector<std::string> s;
    s.reserve(cells.size());
    for (const auto& c : cells) s.push_back(format(c));
    write_line(s);
  }

 private:
  void write_line(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out_ << ',';
      out_ << cells[i];
    }
    out_ << '\n';
  }

  std::ofstream out_;
  std::string path_;
  std::size_t width_;
};

struct Table {
  std::string path;
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  /// Column position; throws naming the file and column when absent.
  std::size_t column(const std::string& name) const {
    for (std::size_t i = 0; i < header.size(); ++i)
      if (header[i] == name) return i;
    throw std::runtime_error(path + ": missing column '" + name + "'");
  }

  double number(std::size_t row, const std::string& name) const {
    return std::stod(rows.at(row).at(column(name)));
  }
  const std::string& text(std::size_t row, const std::string& name) const {
    return rows.at(row).at(column(name));
  }
};

inline std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

inline Table read(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  Table t;
  t.path = path;
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error(path + ": empty file");
  t.header = split(line);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    t.rows.push_back(split(line));
    if (t.rows.back().size() != t.header.size())
      throw std::runtime_error(path + ": ragged row " + std::to_string(t.rows.size()));
  }
  return t;
}

}  // namespace stenoflow::csv

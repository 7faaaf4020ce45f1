#pragma once

#include <cstdio>
#include <fstream>
#include <ostream>
#include <string>
#include <vector>

#include "stagegames/errors.hpp"

namespace stagegames {

// 17 significant digits: enough to round-trip any double, and stable across
// runs so reports can be byte-compared.
inline std::string format_float(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

struct CsvTable {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;

  void write(std::ostream& os) const {
    for (std::size_t c = 0; c < columns.size(); ++c) {
      if (c) os << ',';
      os << columns[c];
    }
    os << '\n';
    for (const auto& row : rows) {
      for (std::size_t c = 0; c < row.size(); ++c) {
        if (c) os << ',';
        os << row[c];
      }
      os << '\n';
    }
  }

  void write_file(const std::string& path) const {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw ValidationError("cannot open output file: " + path);
    write(os);
  }
};

}  // namespace stagegames

#pragma once

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include "pdc/config.hpp"
#include "pdc/errors.hpp"

namespace pdc {

// Fixed 9-significant-digit formatting keeps CSV output byte-reproducible.
inline std::string format_sig9(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return std::string(buf);
}

// CSV emitter: one comment line recording the config hash, one header row,
// then data rows.
class CsvWriter {
 public:
  CsvWriter(const std::string& path, std::uint64_t config_hash,
            const std::vector<std::string>& columns)
      : out_(path, std::ios::binary) {
    if (!out_) throw config_error("cannot open output file: " + path);
    out_ << "# config_hash " << hex64(config_hash) << "\n";
    for (std::size_t i = 0; i < columns.size(); ++i)
      out_ << (i ? "," : "") << columns[i];
    out_ << "\n";
  }

  void row(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i)
      out_ << (i ? "," : "") << cells[i];
    out_ << "\n";
    if (!out_) throw config_error("write failure on CSV output");
  }

  void row(const std::vector<double>& values) {
    std::vector<std::string> cells;
    cells.reserve(values.size());
    for (double v : values) cells.push_back(format_sig9(v));
    row(cells);
  }

 private:
  std::ofstream out_;
};

}  // namespace pdc

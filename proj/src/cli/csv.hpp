#pragma once

#include <cstddef>
#include <ostream>
#include <string>
#include <variant>
#include <vector>

namespace rabi2q::cli {

/// Empty cell, number (%.12g), integer or text.
using Cell = std::variant<std::monostate, double, long long, std::string>;

std::string format_number(double v);

class CsvWriter {
 public:
  /// Writes "# rabi2q <version> <command> <hash>" and the column header.
  CsvWriter(std::ostream& out, const std::string& command, const std::string& hash,
            const std::vector<std::string>& columns);

  void row(const std::vector<Cell>& cells);

 private:
  std::ostream& out_;
  std::size_t width_;
};

}  // namespace rabi2q::cli

#include "csv.hpp"

#include <cstdio>
#include <stdexcept>

namespace rabi2q::cli {

std::string format_number(double v) {
  if (v == 0.0) return "0";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

CsvWriter::CsvWriter(std::ostream& out, const std::string& command, const std::string& hash,
                     const std::vector<std::string>& columns)
    : out_(out), width_(columns.size()) {
  out_ << "# rabi2q " << RABI2Q_VERSION << ' ' << command << ' ' << hash << '\n';
  for (std::size_t i = 0; i < columns.size(); ++i) out_ << (i ? "," : "") << columns[i];
  out_ << '\n';
}

void CsvWriter::row(const std::vector<Cell>& cells) {
  if (cells.size() != width_) throw std::logic_error("csv row width mismatch");
  std::string line;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) line.push_back(',');
    const Cell& c = cells[i];
    if (const auto* d = std::get_if<double>(&c)) line += format_number(*d);
    else if (const auto* n = std::get_if<long long>(&c)) line += std::to_string(*n);
    else if (const auto* s = std::get_if<std::string>(&c)) line += *s;
  }
  line.push_back('\n');
  out_ << line;
}

}  // namespace rabi2q::cli

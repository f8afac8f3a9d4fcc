#include "svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>

#include "config.hpp"
#include "csv.hpp"

namespace rabi2q::cli {

namespace {

constexpr double kWidth = 640.0;
constexpr double kPanelHeight = 300.0;
constexpr double kLeft = 70.0;
constexpr double kRight = 150.0;
constexpr double kTop = 30.0;
constexpr double kBottom = 45.0;

const char* const kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                "#ff7f0e", "#8c564b", "#e377c2", "#17becf"};

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

void render_panel(std::ostringstream& os, const Panel& panel, double y0) {
  double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
  double ymin = xmin, ymax = -xmin;
  for (const auto& s : panel.series) {
    for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
      if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
      xmin = std::min(xmin, s.x[i]);
      xmax = std::max(xmax, s.x[i]);
      ymin = std::min(ymin, s.y[i]);
      ymax = std::max(ymax, s.y[i]);
    }
  }
  if (!std::isfinite(xmin)) xmin = 0.0, xmax = 1.0, ymin = 0.0, ymax = 1.0;
  if (xmax == xmin) xmin -= 0.5, xmax += 0.5;
  if (ymax == ymin) ymin -= 0.5, ymax += 0.5;
  const double pad = 0.04 * (ymax - ymin);
  ymin -= pad;
  ymax += pad;

  const double pw = kWidth - kLeft - kRight;
  const double ph = kPanelHeight - kTop - kBottom;
  const double top = y0 + kTop;
  auto sx = [&](double x) { return kLeft + (x - xmin) / (xmax - xmin) * pw; };
  auto sy = [&](double y) { return top + (ymax - y) / (ymax - ymin) * ph; };

  os << "<text x=\"" << num(kLeft + pw / 2) << "\" y=\"" << num(y0 + 18)
     << "\" text-anchor=\"middle\" font-size=\"14\">" << escape(panel.title) << "</text>\n";
  os << "<rect x=\"" << num(kLeft) << "\" y=\"" << num(top) << "\" width=\"" << num(pw)
     << "\" height=\"" << num(ph) << "\" fill=\"none\" stroke=\"black\"/>\n";
  const double base = top + ph;
  os << "<text x=\"" << num(kLeft) << "\" y=\"" << num(base + 15) << "\" font-size=\"11\">"
     << format_number(xmin) << "</text>\n";
  os << "<text x=\"" << num(kLeft + pw) << "\" y=\"" << num(base + 15)
     << "\" text-anchor=\"end\" font-size=\"11\">" << format_number(xmax) << "</text>\n";
  os << "<text x=\"" << num(kLeft + pw / 2) << "\" y=\"" << num(base + 32)
     << "\" text-anchor=\"middle\" font-size=\"12\">" << escape(panel.xlabel) << "</text>\n";
  os << "<text x=\"" << num(kLeft - 5) << "\" y=\"" << num(base) << "\" text-anchor=\"end\" font-size=\"11\">"
     << format_number(ymin) << "</text>\n";
  os << "<text x=\"" << num(kLeft - 5) << "\" y=\"" << num(top + 10)
     << "\" text-anchor=\"end\" font-size=\"11\">" << format_number(ymax) << "</text>\n";
  os << "<text x=\"15\" y=\"" << num(top + ph / 2) << "\" font-size=\"12\" transform=\"rotate(-90 15 "
     << num(top + ph / 2) << ")\" text-anchor=\"middle\">" << escape(panel.ylabel) << "</text>\n";

  std::map<std::string, std::size_t> colour;
  std::vector<std::string> order;
  for (const auto& s : panel.series) {
    if (colour.emplace(s.label, colour.size()).second) order.push_back(s.label);
    const char* c = kPalette[colour[s.label] % std::size(kPalette)];
    std::string pts;
    auto flush = [&] {
      if (!pts.empty()) {
        os << "<polyline fill=\"none\" stroke=\"" << c << "\" stroke-width=\"1.2\" points=\"" << pts
           << "\"/>\n";
      }
      pts.clear();
    };
    for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
      if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) {
        flush();
        continue;
      }
      if (!pts.empty()) pts.push_back(' ');
      pts += num(sx(s.x[i])) + "," + num(sy(s.y[i]));
    }
    flush();
  }
  for (std::size_t i = 0; i < order.size(); ++i) {
    const double ly = top + 12 + 16.0 * static_cast<double>(i);
    const double lx = kLeft + pw + 12;
    os << "<line x1=\"" << num(lx) << "\" y1=\"" << num(ly - 4) << "\" x2=\"" << num(lx + 20)
       << "\" y2=\"" << num(ly - 4) << "\" stroke=\"" << kPalette[i % std::size(kPalette)]
       << "\" stroke-width=\"2\"/>\n";
    os << "<text x=\"" << num(lx + 26) << "\" y=\"" << num(ly) << "\" font-size=\"11\">"
       << escape(order[i]) << "</text>\n";
  }
}

}  // namespace

std::string render_svg(const std::vector<Panel>& panels) {
  std::ostringstream os;
  const double height = kPanelHeight * static_cast<double>(std::max<std::size_t>(1, panels.size()));
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(kWidth) << "\" height=\""
     << num(height) << "\" viewBox=\"0 0 " << num(kWidth) << ' ' << num(height) << "\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  for (std::size_t i = 0; i < panels.size(); ++i) {
    render_panel(os, panels[i], kPanelHeight * static_cast<double>(i));
  }
  os << "</svg>\n";
  return os.str();
}

void write_svg(const std::string& path, const std::vector<Panel>& panels) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write svg file '" + path + "'");
  out << render_svg(panels);
}

}  // namespace rabi2q::cli

#pragma once

#include <string>
#include <vector>

namespace rabi2q::cli {

struct Series {
  std::string label;  // series sharing a label share a colour and one legend entry
  std::vector<double> x;
  std::vector<double> y;
};

struct Panel {
  std::string title;
  std::string xlabel;
  std::string ylabel;
  std::vector<Series> series;
};

/// Panels stacked vertically, each with a frame, min/max tick labels and a
/// legend. Non-finite points break a polyline.
std::string render_svg(const std::vector<Panel>& panels);
void write_svg(const std::string& path, const std::vector<Panel>& panels);

}  // namespace rabi2q::cli

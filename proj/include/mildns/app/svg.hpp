#pragma once

#include <string>
#include <vector>

#include "mildns/app/csv.hpp"

namespace mildns::app {

struct Series {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
};

// Static line plot. Non-finite points are skipped; the y axis is logarithmic
// when every plotted value is positive. An empty series gives bare axes.
std::string render_svg(const std::string& title, const Series& main, const std::vector<Series>& overlays);

// One SVG per norm column of a norms table (every column except t and the
// blowup_threshold_* columns), with all threshold columns overlaid. Returns
// the file names written into out_dir.
std::vector<std::string> plot_norms(const CsvTable& table, const std::string& out_dir);

}  // namespace mildns::app

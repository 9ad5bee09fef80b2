#pragma once

#include <string>
#include <vector>

#include "cwknn/classifier.hpp"

namespace cwknn::harness {

struct ChartSeries {
  std::string name;
  std::vector<double> x;
  std::vector<double> y;
};

struct ChartSpec {
  std::string title;
  std::string x_label;
  std::string y_label;
  std::vector<ChartSeries> series;
};

/// Standalone SVG line chart, one <polyline class="series"> per series.
/// Axis ticks (<text class="xtick">, <text class="ytick">) run from the data
/// minimum to the data maximum with "%.2f" labels. Output is a pure function
/// of the input.
std::string render_svg(const ChartSpec& spec);

/// Error rate (percent) against k for the k-NN rows of `table`, or against
/// sigma for the decayed rows when the table has no k-NN rows. Throws
/// EmptyTable for an empty table.
std::string emit_chart(const ErrorTable& table, const std::string& title = "CW-SSIM k-NN error");

}  // namespace cwknn::harness

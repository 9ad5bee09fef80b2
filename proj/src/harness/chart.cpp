#include "cwknn/harness/chart.hpp"

#include <algorithm>
#include <cstdio>
#include <limits>
#include <sstream>

#include "cwknn/error.hpp"

namespace cwknn::harness {
namespace {

constexpr double kWidth = 640, kHeight = 420;
constexpr double kLeft = 70, kRight = 150, kTop = 40, kBottom = 60;
constexpr int kTicks = 5;
constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2"};

std::string fmt(const char* pattern, double v) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), pattern, v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

struct Axis {
  double lo, hi, pixel_lo, pixel_hi;
  double map(double v) const {
    if (hi == lo) return (pixel_lo + pixel_hi) / 2;
    return pixel_lo + (v - lo) / (hi - lo) * (pixel_hi - pixel_lo);
  }
  std::vector<double> ticks() const {
    if (hi == lo) return {lo};
    std::vector<double> t;
    for (int i = 0; i < kTicks; ++i) t.push_back(i == kTicks - 1 ? hi : lo + (hi - lo) * i / (kTicks - 1));
    return t;
  }
};

}  // namespace

std::string render_svg(const ChartSpec& spec) {
  double xlo = std::numeric_limits<double>::infinity(), xhi = -xlo, ylo = xlo, yhi = -xlo;
  std::size_t points = 0;
  for (const auto& s : spec.series) {
    if (s.x.size() != s.y.size()) throw Error(ErrorCode::LengthMismatch, "series '" + s.name + "' x/y lengths differ");
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      xlo = std::min(xlo, s.x[i]);
      xhi = std::max(xhi, s.x[i]);
      ylo = std::min(ylo, s.y[i]);
      yhi = std::max(yhi, s.y[i]);
      ++points;
    }
  }
  if (points == 0) throw Error(ErrorCode::EmptyTable, "nothing to chart");

  const Axis xa{xlo, xhi, kLeft, kWidth - kRight};
  const Axis ya{ylo, yhi, kHeight - kBottom, kTop};
  std::ostringstream o;
  o << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
    << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
    << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\" font-family=\"sans-serif\" font-size=\"12\">\n"
    << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
    << "<text class=\"title\" x=\"" << kWidth / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"15\">"
    << escape(spec.title) << "</text>\n";

  o << "<g class=\"axes\" stroke=\"black\" fill=\"none\">\n"
    << "<line x1=\"" << kLeft << "\" y1=\"" << kHeight - kBottom << "\" x2=\"" << kWidth - kRight << "\" y2=\""
    << kHeight - kBottom << "\"/>\n"
    << "<line x1=\"" << kLeft << "\" y1=\"" << kTop << "\" x2=\"" << kLeft << "\" y2=\"" << kHeight - kBottom
    << "\"/>\n</g>\n";

  for (double t : xa.ticks()) {
    const std::string px = fmt("%.2f", xa.map(t));
    o << "<line class=\"xgrid\" x1=\"" << px << "\" y1=\"" << kHeight - kBottom << "\" x2=\"" << px << "\" y2=\""
      << kHeight - kBottom + 5 << "\" stroke=\"black\"/>\n"
      << "<text class=\"xtick\" x=\"" << px << "\" y=\"" << kHeight - kBottom + 18 << "\" text-anchor=\"middle\">"
      << fmt("%.2f", t) << "</text>\n";
  }
  for (double t : ya.ticks()) {
    const std::string py = fmt("%.2f", ya.map(t));
    o << "<line class=\"ygrid\" x1=\"" << kLeft << "\" y1=\"" << py << "\" x2=\"" << kWidth - kRight << "\" y2=\""
      << py << "\" stroke=\"#dddddd\"/>\n"
      << "<text class=\"ytick\" x=\"" << kLeft - 6 << "\" y=\"" << py << "\" text-anchor=\"end\" dy=\"4\">"
      << fmt("%.2f", t) << "</text>\n";
  }
  o << "<text class=\"xlabel\" x=\"" << (kLeft + kWidth - kRight) / 2 << "\" y=\"" << kHeight - 18
    << "\" text-anchor=\"middle\">" << escape(spec.x_label) << "</text>\n"
    << "<text class=\"ylabel\" x=\"18\" y=\"" << (kTop + kHeight - kBottom) / 2
    << "\" text-anchor=\"middle\" transform=\"rotate(-90 18 " << (kTop + kHeight - kBottom) / 2 << ")\">"
    << escape(spec.y_label) << "</text>\n";

  for (std::size_t s = 0; s < spec.series.size(); ++s) {
    const auto& series = spec.series[s];
    if (series.x.empty()) continue;
    const char* colour = kPalette[s % std::size(kPalette)];
    o << "<polyline class=\"series\" data-name=\"" << escape(series.name) << "\" fill=\"none\" stroke=\"" << colour
      << "\" stroke-width=\"2\" points=\"";
    for (std::size_t i = 0; i < series.x.size(); ++i) {
      if (i) o << ' ';
      o << fmt("%.2f", xa.map(series.x[i])) << ',' << fmt("%.2f", ya.map(series.y[i]));
    }
    o << "\"/>\n";
    const double ly = kTop + 18.0 * s;
    o << "<line class=\"legend\" x1=\"" << kWidth - kRight + 12 << "\" y1=\"" << ly << "\" x2=\""
      << kWidth - kRight + 32 << "\" y2=\"" << ly << "\" stroke=\"" << colour << "\" stroke-width=\"2\"/>\n"
      << "<text class=\"legend\" x=\"" << kWidth - kRight + 38 << "\" y=\"" << ly + 4 << "\">"
      << escape(series.name) << "</text>\n";
  }
  o << "</svg>\n";
  return o.str();
}

std::string emit_chart(const ErrorTable& table, const std::string& title) {
  if (table.empty()) throw Error(ErrorCode::EmptyTable, "cannot chart an empty error table");
  const bool has_knn = std::any_of(table.begin(), table.end(), [](const ErrorRow& r) {
    return r.scheme == "unweighted" || r.scheme == "weighted";
  });
  ChartSpec spec;
  spec.title = title;
  spec.x_label = has_knn ? "k (neighbours)" : "sigma";
  spec.y_label = "error rate (%)";
  for (const auto& row : table) {
    const bool knn = row.scheme == "unweighted" || row.scheme == "weighted";
    if (knn != has_knn) continue;
    auto it = std::find_if(spec.series.begin(), spec.series.end(),
                           [&](const ChartSeries& s) { return s.name == row.scheme; });
    if (it == spec.series.end()) {
      spec.series.push_back(ChartSeries{row.scheme, {}, {}});
      it = std::prev(spec.series.end());
    }
    it->x.push_back(row.parameter);
    it->y.push_back(100.0 * row.error_rate());
  }
  return render_svg(spec);
}

}  // namespace cwknn::harness

#include "cwknn/simgen.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "cwknn/error.hpp"
#include "cwknn/pgm.hpp"

namespace cwknn {
namespace {

double sample_bilinear(const GrayImage& img, double x, double y) {
  const double fx = std::floor(x);
  const double fy = std::floor(y);
  const long x0 = static_cast<long>(fx);
  const long y0 = static_cast<long>(fy);
  const double tx = x - fx;
  const double ty = y - fy;
  const long w = static_cast<long>(img.width());
  const long h = static_cast<long>(img.height());
  auto pix = [&](long px, long py) {
    return (px < 0 || py < 0 || px >= w || py >= h) ? 0.0 : img.at(px, py);
  };
  double v = (1.0 - tx) * (1.0 - ty) * pix(x0, y0);
  if (tx != 0.0) v += tx * (1.0 - ty) * pix(x0 + 1, y0);
  if (ty != 0.0) v += (1.0 - tx) * ty * pix(x0, y0 + 1);
  if (tx != 0.0 && ty != 0.0) v += tx * ty * pix(x0 + 1, y0 + 1);
  return v;
}

}  // namespace

void TransformParams::validate() const {
  if (!(shift >= 0.0) || !(rotation_deg >= 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "shift and rotation ranges must be non-negative");
  }
  if (!(scale_min > 0.0) || !(scale_min <= scale_max)) {
    throw Error(ErrorCode::InvalidArgument, "scale range must satisfy 0 < min <= max");
  }
  if (!(blur_min >= 0.0) || !(blur_min <= blur_max)) {
    throw Error(ErrorCode::InvalidArgument, "blur range must satisfy 0 <= min <= max");
  }
}

TransformDraw sample_draw(const TransformParams& params, SplitMix64& rng) {
  TransformDraw d;
  d.dx = std::lround(rng.uniform(-params.shift, params.shift));
  d.dy = std::lround(rng.uniform(-params.shift, params.shift));
  d.scale = rng.uniform(params.scale_min, params.scale_max);
  d.rotation_deg = rng.uniform(-params.rotation_deg, params.rotation_deg);
  d.blur_sigma = rng.uniform(params.blur_min, params.blur_max);
  return d;
}

GrayImage gaussian_blur(const GrayImage& image, double sigma) {
  if (!(sigma > 0.0)) return image;
  const long radius = static_cast<long>(std::ceil(3.0 * sigma));
  std::vector<double> kernel(2 * radius + 1);
  double norm = 0.0;
  for (long i = -radius; i <= radius; ++i) {
    kernel[i + radius] = std::exp(-0.5 * (i * i) / (sigma * sigma));
    norm += kernel[i + radius];
  }
  for (auto& k : kernel) k /= norm;

  const long w = static_cast<long>(image.width());
  const long h = static_cast<long>(image.height());
  std::vector<double> tmp(image.size(), 0.0), out(image.size(), 0.0);
  for (long y = 0; y < h; ++y) {
    for (long x = 0; x < w; ++x) {
      double acc = 0.0;
      for (long i = -radius; i <= radius; ++i) {
        const long sx = x + i;
        if (sx >= 0 && sx < w) acc += kernel[i + radius] * image.at(sx, y);
      }
      tmp[y * w + x] = acc;
    }
  }
  for (long y = 0; y < h; ++y) {
    for (long x = 0; x < w; ++x) {
      double acc = 0.0;
      for (long i = -radius; i <= radius; ++i) {
        const long sy = y + i;
        if (sy >= 0 && sy < h) acc += kernel[i + radius] * tmp[sy * w + x];
      }
      out[y * w + x] = std::clamp(acc, 0.0, 1.0);
    }
  }
  return GrayImage(image.width(), image.height(), std::move(out));
}

GrayImage transform(const GrayImage& source, const TransformDraw& draw) {
  const double theta = draw.rotation_deg * std::numbers::pi / 180.0;
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  const double cx = (static_cast<double>(source.width()) - 1.0) / 2.0;
  const double cy = (static_cast<double>(source.height()) - 1.0) / 2.0;

  std::vector<double> out(source.size());
  for (std::size_t y = 0; y < source.height(); ++y) {
    for (std::size_t x = 0; x < source.width(); ++x) {
      // Invert shift, then scale, then rotation.
      const double ux = (static_cast<double>(x) - cx - static_cast<double>(draw.dx)) / draw.scale;
      const double uy = (static_cast<double>(y) - cy - static_cast<double>(draw.dy)) / draw.scale;
      const double sx = cx + ux * c - uy * s;
      const double sy = cy + ux * s + uy * c;
      out[y * source.width() + x] = std::clamp(sample_bilinear(source, sx, sy), 0.0, 1.0);
    }
  }
  GrayImage moved(source.width(), source.height(), std::move(out));
  return gaussian_blur(moved, draw.blur_sigma);
}

LabeledSet generate(std::span<const GrayImage> templates, std::size_t count, const TransformParams& params) {
  if (templates.size() != 10) {
    throw Error(ErrorCode::TemplateCountMismatch, "need 10 templates, got " + std::to_string(templates.size()));
  }
  if (count < 10) throw Error(ErrorCode::InvalidArgument, "count must be at least 10");
  params.validate();
  for (const auto& t : templates) {
    if (t.width() != t.height() || t.width() != templates.front().width()) {
      throw Error(ErrorCode::DimensionMismatch, "templates must be square and share one size");
    }
  }

  SplitMix64 rng(params.seed);
  LabeledSet set;
  set.images.reserve(count);
  set.labels.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    const std::size_t digit = i % 10;
    set.images.push_back(transform(templates[digit], sample_draw(params, rng)));
    set.labels.push_back(static_cast<Label>(digit));
  }
  return set;
}

std::vector<GrayImage> load_templates(const std::filesystem::path& dir) {
  std::vector<GrayImage> templates;
  for (int d = 0; d < 10; ++d) templates.push_back(load_pgm(dir / (std::to_string(d) + ".pgm")));
  return templates;
}

}  // namespace cwknn

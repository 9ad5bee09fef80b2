#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "cwknn/image.hpp"
#include "cwknn/rng.hpp"

namespace cwknn {

/// Sampling ranges for simulated digits. Shift and rotation are symmetric
/// (+-shift px, +-rotation degrees); scale and blur are [min, max].
struct TransformParams {
  double shift = 3.0;
  double scale_min = 0.9;
  double scale_max = 1.1;
  double rotation_deg = 15.0;
  double blur_min = 0.0;
  double blur_max = 1.0;
  std::uint64_t seed = 1;

  void validate() const;
};

/// One sampled distortion.
struct TransformDraw {
  long dx = 0;
  long dy = 0;
  double scale = 1.0;
  double rotation_deg = 0.0;
  double blur_sigma = 0.0;
};

/// Draws dx, dy, scale, rotation, blur in that order, one uniform each.
TransformDraw sample_draw(const TransformParams& params, SplitMix64& rng);

/// Rotation about the image centre (positive = counter-clockwise on screen),
/// then scaling about the centre, then the integer shift, resampled
/// bilinearly with zero fill; then a separable Gaussian blur (skipped for
/// sigma 0). Output is clamped to [0, 1] and keeps the template's size.
GrayImage transform(const GrayImage& source, const TransformDraw& draw);

/// Separable Gaussian blur, kernel radius ceil(3 sigma), zero fill.
GrayImage gaussian_blur(const GrayImage& image, double sigma);

/// `templates[d]` is the template for digit d; exactly ten are required.
/// Image i is a distortion of template i % 10 and carries label i % 10.
LabeledSet generate(std::span<const GrayImage> templates, std::size_t count, const TransformParams& params);

/// Loads 0.pgm ... 9.pgm from `dir`.
std::vector<GrayImage> load_templates(const std::filesystem::path& dir);

}  // namespace cwknn

#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "cwknn/image.hpp"
#include "cwknn/steerable.hpp"

namespace cwknn {

/// Stabilizers of the spatial SSIM index, defined on the [0, 1] intensity scale.
struct SsimConstants {
  double c1 = 0.01 * 0.01;
  double c2 = 0.03 * 0.03;
};

/// Population (divide-by-M) moments of a patch pair.
struct PatchStats {
  double mu_x = 0.0;
  double mu_y = 0.0;
  double sigma_x = 0.0;
  double sigma_y = 0.0;
  double sigma_xy = 0.0;
};

PatchStats patch_stats(std::span<const double> x, std::span<const double> y);

/// (2 mu_x mu_y + C1)(2 sigma_xy + C2) / ((mu_x^2 + mu_y^2 + C1)(sigma_x^2 + sigma_y^2 + C2))
double ssim_patch(std::span<const double> x, std::span<const double> y, const SsimConstants& c = {});

/// Mean of ssim_patch over every full window x window block at `stride`.
double mean_ssim(const GrayImage& a, const GrayImage& b, std::size_t window = 7, std::size_t stride = 1,
                 const SsimConstants& c = {});

struct CwSsimConfig {
  PyramidConfig pyramid;
  std::size_t window = 7;  // odd side length
  std::size_t stride = 1;
  double k = 0.01;

  void validate() const;
  std::string canonical() const;

  friend bool operator==(const CwSsimConfig&, const CwSsimConfig&) = default;
};

/// (2 |sum cx conj(cy)| + K) / (sum |cx|^2 + sum |cy|^2 + K), in [0, 1].
double cwssim_window(std::span<const Complex> cx, std::span<const Complex> cy, double k);

/// Unweighted mean of cwssim_window over all full windows of all oriented
/// subbands.
double cwssim_index(const Pyramid& a, const Pyramid& b, const CwSsimConfig& cfg);

/// Per-subband window scores (row-major over window positions), the terms
/// averaged by cwssim_index.
std::vector<std::vector<double>> cwssim_window_scores(const Pyramid& a, const Pyramid& b,
                                                      const CwSsimConfig& cfg);

/// decompose + cwssim_index at full precision.
double cwssim_images(const GrayImage& a, const GrayImage& b, const CwSsimConfig& cfg);

/// Scoring form of a pyramid: coefficients stored as 32-bit floats (the cache
/// precision) plus the per-window energy sums of this image. Scores between
/// two ScoringPyramids are computed in double precision from the float
/// coefficients, so a cached and a freshly decomposed image score identically.
class ScoringPyramid {
 public:
  ScoringPyramid() = default;
  ScoringPyramid(const Pyramid& pyramid, const CwSsimConfig& cfg);

  std::size_t width() const noexcept { return width_; }
  std::size_t height() const noexcept { return height_; }
  const CwSsimConfig& config() const noexcept { return cfg_; }
  std::size_t window_count() const noexcept { return window_count_; }

  struct Band {
    std::size_t width;
    std::size_t height;
    std::size_t coeff_offset;   // into coeffs(): re plane, then im plane
    std::size_t energy_offset;  // into energies()
  };
  std::span<const Band> bands() const noexcept { return bands_; }
  std::span<const float> coeffs() const noexcept { return coeffs_; }
  std::span<const double> energies() const noexcept { return energies_; }

 private:
  std::size_t width_ = 0;
  std::size_t height_ = 0;
  CwSsimConfig cfg_;
  std::size_t window_count_ = 0;
  std::vector<Band> bands_;
  std::vector<float> coeffs_;
  std::vector<double> energies_;
};

/// cwssim_index computed from two ScoringPyramids built with the same config.
double cwssim_score(const ScoringPyramid& a, const ScoringPyramid& b);

}  // namespace cwknn

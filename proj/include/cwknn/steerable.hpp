#pragma once

#include <complex>
#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "cwknn/image.hpp"

namespace cwknn {

using Complex = std::complex<double>;

struct PyramidConfig {
  std::size_t scales = 2;
  std::size_t orientations = 8;
  bool decimated = false;

  /// Throws InvalidArgument for scales < 1 or orientations < 2.
  void validate() const;
  /// Stable text form, e.g. "scales=2;orientations=8;decimated=0".
  std::string canonical() const;

  friend bool operator==(const PyramidConfig&, const PyramidConfig&) = default;
};

/// Oriented band of complex (analytic) coefficients, row-major.
struct Subband {
  std::size_t scale = 0;
  std::size_t orientation = 0;
  std::size_t width = 0;
  std::size_t height = 0;
  std::vector<Complex> coeffs;

  const Complex& at(std::size_t x, std::size_t y) const { return coeffs[y * width + x]; }
};

struct Pyramid {
  PyramidConfig config;
  std::size_t width = 0;   // source image width
  std::size_t height = 0;  // source image height
  std::vector<Subband> subbands;  // scale-major, orientation-minor
  // Real residual bands at full resolution. Not used for scoring and not
  // serialized, so they are empty after a cache round-trip.
  std::vector<double> highpass;
  std::vector<double> lowpass;

  const Subband& band(std::size_t scale, std::size_t orientation) const {
    return subbands[scale * config.orientations + orientation];
  }
};

/// Subband grid size at `scale` (halved per scale in decimated mode).
std::size_t subband_extent(std::size_t image_extent, std::size_t scale, bool decimated) noexcept;

/// Angular frequency in (-pi, pi] of DFT bin `index` along an axis of length `n`.
double dft_frequency(std::size_t index, std::size_t n) noexcept;

/// Real-valued frequency masks on the width x height DFT grid (index v*width+u).
///
/// Radial windows are one-octave log-raised-cosine transitions; oriented band
/// `s` peaks at radius pi/2^(s+1). The angular window of orientation `o` is
/// 2*alpha*cos^(O-1)(theta - pi*o/O) on the half-plane where the cosine is
/// positive and zero elsewhere, so filtered bands are analytic. With these
/// amplitudes
///   hp^2 + lp^2 + sum_{s,o} (|M(w)|^2 + |M(-w)|^2) / 4 == 1
/// at every frequency.
class FilterBank {
 public:
  FilterBank(std::size_t width, std::size_t height, const PyramidConfig& config);
  ~FilterBank();
  FilterBank(const FilterBank&) = delete;
  FilterBank& operator=(const FilterBank&) = delete;

  std::size_t width() const noexcept { return width_; }
  std::size_t height() const noexcept { return height_; }
  const PyramidConfig& config() const noexcept { return config_; }

  std::span<const double> oriented(std::size_t scale, std::size_t orientation) const;
  std::span<const double> highpass() const noexcept { return highpass_; }
  std::span<const double> lowpass() const noexcept { return lowpass_; }

  Pyramid decompose(const GrayImage& image) const;

 private:
  struct Plans;

  std::size_t width_;
  std::size_t height_;
  PyramidConfig config_;
  std::vector<std::vector<double>> oriented_;
  std::vector<double> highpass_;
  std::vector<double> lowpass_;
  std::unique_ptr<Plans> plans_;
};

/// Throws ConfigTooDeep when the coarsest band centre falls below the lowest
/// nonzero frequency of the grid, InvalidArgument for grids under 8x8.
std::shared_ptr<const FilterBank> build_filter_bank(std::size_t width, std::size_t height,
                                                    const PyramidConfig& config);

/// Process-wide cache of filter banks keyed by (width, height, config).
std::shared_ptr<const FilterBank> shared_filter_bank(std::size_t width, std::size_t height,
                                                     const PyramidConfig& config);

Pyramid decompose(const GrayImage& image, const PyramidConfig& config);

/// Copy with every coefficient rounded through 32-bit float.
Pyramid quantize_to_float(const Pyramid& pyramid);

}  // namespace cwknn

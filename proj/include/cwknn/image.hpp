#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace cwknn {

using Bytes = std::vector<std::uint8_t>;
using Label = std::uint8_t;

/// Row-major grayscale image with intensities in [0, 1].
class GrayImage {
 public:
  GrayImage() = default;
  /// Zero-filled image.
  GrayImage(std::size_t width, std::size_t height);
  /// Takes ownership of `pixels`; throws InvalidArgument if the length is not
  /// width*height or any intensity lies outside [0, 1].
  GrayImage(std::size_t width, std::size_t height, std::vector<double> pixels);

  /// Intensities byte/255.
  static GrayImage from_bytes(std::size_t width, std::size_t height,
                              std::span<const std::uint8_t> bytes);

  std::size_t width() const noexcept { return width_; }
  std::size_t height() const noexcept { return height_; }
  std::size_t size() const noexcept { return pixels_.size(); }
  bool empty() const noexcept { return pixels_.empty(); }

  double at(std::size_t x, std::size_t y) const { return pixels_[y * width_ + x]; }
  std::span<const double> pixels() const noexcept { return pixels_; }

  /// Nearest byte value of every pixel, row-major.
  Bytes to_bytes() const;

  friend bool operator==(const GrayImage&, const GrayImage&) = default;

 private:
  std::size_t width_ = 0;
  std::size_t height_ = 0;
  std::vector<double> pixels_;
};

/// Circular shift: output(x, y) = input(x - dx, y - dy) with wraparound.
GrayImage circshift(const GrayImage& image, long dx, long dy);

struct LabeledSet {
  std::vector<GrayImage> images;
  std::vector<Label> labels;

  std::size_t size() const noexcept { return images.size(); }
  bool empty() const noexcept { return images.empty(); }

  /// Throws unless labels match images one-to-one, all images share one
  /// shape and all labels are digits.
  void validate() const;

  /// Subset in the order given by `indices`.
  LabeledSet select(std::span<const std::size_t> indices) const;
};

}  // namespace cwknn

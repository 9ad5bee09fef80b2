#include "cwknn/image.hpp"

#include <cmath>
#include <string>

#include "cwknn/error.hpp"

namespace cwknn {

GrayImage::GrayImage(std::size_t width, std::size_t height)
    : width_(width), height_(height), pixels_(width * height, 0.0) {}

GrayImage::GrayImage(std::size_t width, std::size_t height, std::vector<double> pixels)
    : width_(width), height_(height), pixels_(std::move(pixels)) {
  if (pixels_.size() != width_ * height_) {
    throw Error(ErrorCode::InvalidArgument,
                "pixel count " + std::to_string(pixels_.size()) + " != " +
                    std::to_string(width_) + "x" + std::to_string(height_));
  }
  for (double v : pixels_) {
    if (!(v >= 0.0 && v <= 1.0)) {
      throw Error(ErrorCode::InvalidArgument, "intensity outside [0,1]");
    }
  }
}

GrayImage GrayImage::from_bytes(std::size_t width, std::size_t height,
                                std::span<const std::uint8_t> bytes) {
  if (bytes.size() != width * height) {
    throw Error(ErrorCode::InvalidArgument, "byte count does not match image shape");
  }
  std::vector<double> pixels(bytes.size());
  for (std::size_t i = 0; i < bytes.size(); ++i) pixels[i] = bytes[i] / 255.0;
  GrayImage image;
  image.width_ = width;
  image.height_ = height;
  image.pixels_ = std::move(pixels);
  return image;
}

Bytes GrayImage::to_bytes() const {
  Bytes out(pixels_.size());
  for (std::size_t i = 0; i < pixels_.size(); ++i) {
    out[i] = static_cast<std::uint8_t>(std::lround(pixels_[i] * 255.0));
  }
  return out;
}

GrayImage circshift(const GrayImage& image, long dx, long dy) {
  const long w = static_cast<long>(image.width());
  const long h = static_cast<long>(image.height());
  std::vector<double> out(image.size());
  for (long y = 0; y < h; ++y) {
    const long sy = ((y - dy) % h + h) % h;
    for (long x = 0; x < w; ++x) {
      const long sx = ((x - dx) % w + w) % w;
      out[y * w + x] = image.at(sx, sy);
    }
  }
  return GrayImage(image.width(), image.height(), std::move(out));
}

void LabeledSet::validate() const {
  if (images.size() != labels.size()) {
    throw Error(ErrorCode::LengthMismatch, std::to_string(images.size()) + " images but " +
                                               std::to_string(labels.size()) + " labels");
  }
  for (const auto& img : images) {
    if (img.width() != images.front().width() || img.height() != images.front().height()) {
      throw Error(ErrorCode::DimensionMismatch, "images in a set must share one shape");
    }
  }
  for (Label l : labels) {
    if (l > 9) throw Error(ErrorCode::BadLabel, "label " + std::to_string(l));
  }
}

LabeledSet LabeledSet::select(std::span<const std::size_t> indices) const {
  LabeledSet out;
  out.images.reserve(indices.size());
  out.labels.reserve(indices.size());
  for (std::size_t i : indices) {
    out.images.push_back(images.at(i));
    out.labels.push_back(labels.at(i));
  }
  return out;
}

}  // namespace cwknn

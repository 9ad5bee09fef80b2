#include "cwknn/idx.hpp"

#include <string>

#include "cwknn/error.hpp"
#include "cwknn/io.hpp"

namespace cwknn {
namespace {

std::uint32_t read_be_u32(std::span<const std::uint8_t> bytes, std::size_t offset) {
  if (bytes.size() < offset + 4) {
    throw Error(ErrorCode::Truncated, "IDX header cut short");
  }
  return (std::uint32_t(bytes[offset]) << 24) | (std::uint32_t(bytes[offset + 1]) << 16) |
         (std::uint32_t(bytes[offset + 2]) << 8) | std::uint32_t(bytes[offset + 3]);
}

void append_be_u32(Bytes& out, std::uint32_t v) {
  out.push_back(static_cast<std::uint8_t>(v >> 24));
  out.push_back(static_cast<std::uint8_t>(v >> 16));
  out.push_back(static_cast<std::uint8_t>(v >> 8));
  out.push_back(static_cast<std::uint8_t>(v));
}

void check_magic(std::span<const std::uint8_t> bytes, std::uint32_t expected) {
  if (bytes.size() < 4) throw Error(ErrorCode::WrongMagic, "input shorter than an IDX magic");
  const std::uint32_t magic = read_be_u32(bytes, 0);
  if (magic != expected) {
    throw Error(ErrorCode::WrongMagic, "IDX magic " + std::to_string(magic) + ", expected " +
                                           std::to_string(expected));
  }
}

}  // namespace

std::vector<GrayImage> parse_idx_images(std::span<const std::uint8_t> raw) {
  const Bytes decoded = gunzip_if_needed(raw);
  const std::span<const std::uint8_t> bytes(decoded);
  check_magic(bytes, kIdxImageMagic);
  const std::uint32_t count = read_be_u32(bytes, 4);
  const std::uint32_t rows = read_be_u32(bytes, 8);
  const std::uint32_t cols = read_be_u32(bytes, 12);
  if (rows == 0 || cols == 0) throw Error(ErrorCode::ZeroDim, "IDX image with a zero dimension");

  const std::size_t per_image = std::size_t(rows) * cols;
  const std::size_t payload = per_image * count;
  if (bytes.size() - 16 < payload) {
    throw Error(ErrorCode::Truncated, "IDX header promises " + std::to_string(payload) +
                                          " pixel bytes, file has " + std::to_string(bytes.size() - 16));
  }
  std::vector<GrayImage> images;
  images.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    images.push_back(GrayImage::from_bytes(cols, rows, bytes.subspan(16 + i * per_image, per_image)));
  }
  return images;
}

std::vector<Label> parse_idx_labels(std::span<const std::uint8_t> raw) {
  const Bytes decoded = gunzip_if_needed(raw);
  const std::span<const std::uint8_t> bytes(decoded);
  check_magic(bytes, kIdxLabelMagic);
  const std::uint32_t count = read_be_u32(bytes, 4);
  if (bytes.size() - 8 < count) {
    throw Error(ErrorCode::Truncated, "IDX header promises " + std::to_string(count) + " labels");
  }
  std::vector<Label> labels(bytes.begin() + 8, bytes.begin() + 8 + count);
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] > 9) {
      throw Error(ErrorCode::BadLabel, "label " + std::to_string(labels[i]) + " at index " + std::to_string(i));
    }
  }
  return labels;
}

Bytes write_idx_images(std::span<const GrayImage> images, std::uint32_t rows, std::uint32_t cols) {
  if (!images.empty()) {
    rows = static_cast<std::uint32_t>(images.front().height());
    cols = static_cast<std::uint32_t>(images.front().width());
  }
  Bytes out;
  out.reserve(16 + images.size() * rows * cols);
  append_be_u32(out, kIdxImageMagic);
  append_be_u32(out, static_cast<std::uint32_t>(images.size()));
  append_be_u32(out, rows);
  append_be_u32(out, cols);
  for (const auto& img : images) {
    if (img.height() != rows || img.width() != cols) {
      throw Error(ErrorCode::DimensionMismatch, "IDX images must share one shape");
    }
    const Bytes b = img.to_bytes();
    out.insert(out.end(), b.begin(), b.end());
  }
  return out;
}

Bytes write_idx_labels(std::span<const Label> labels) {
  Bytes out;
  out.reserve(8 + labels.size());
  append_be_u32(out, kIdxLabelMagic);
  append_be_u32(out, static_cast<std::uint32_t>(labels.size()));
  for (Label l : labels) {
    if (l > 9) throw Error(ErrorCode::BadLabel, "label " + std::to_string(l));
    out.push_back(l);
  }
  return out;
}

LabeledSet load_labeled_set(const std::filesystem::path& images, const std::filesystem::path& labels) {
  LabeledSet set;
  set.images = parse_idx_images(read_file(images));
  set.labels = parse_idx_labels(read_file(labels));
  if (set.images.size() != set.labels.size()) {
    throw Error(ErrorCode::LengthMismatch, images.string() + " has " + std::to_string(set.images.size()) +
                                               " images but " + labels.string() + " has " +
                                               std::to_string(set.labels.size()) + " labels");
  }
  return set;
}

void save_labeled_set(const LabeledSet& set, const std::filesystem::path& images,
                      const std::filesystem::path& labels) {
  set.validate();
  write_file(images, write_idx_images(set.images));
  write_file(labels, write_idx_labels(set.labels));
}

}  // namespace cwknn

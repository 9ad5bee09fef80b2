#pragma once

#include <filesystem>
#include <span>
#include <vector>

#include "cwknn/image.hpp"

namespace cwknn {

inline constexpr std::uint32_t kIdxImageMagic = 0x00000803;
inline constexpr std::uint32_t kIdxLabelMagic = 0x00000801;

// IDX: big-endian u32 magic, u32 dimension sizes, then unsigned bytes.
// Gzip input is decompressed transparently.

std::vector<GrayImage> parse_idx_images(std::span<const std::uint8_t> bytes);
std::vector<Label> parse_idx_labels(std::span<const std::uint8_t> bytes);

/// Images are quantized to the nearest byte. All images must share one shape;
/// an empty list is written as a 0-count file with rows = cols = 0 unless
/// `rows`/`cols` are given.
Bytes write_idx_images(std::span<const GrayImage> images, std::uint32_t rows = 0, std::uint32_t cols = 0);
Bytes write_idx_labels(std::span<const Label> labels);

LabeledSet load_labeled_set(const std::filesystem::path& images, const std::filesystem::path& labels);
void save_labeled_set(const LabeledSet& set, const std::filesystem::path& images,
                      const std::filesystem::path& labels);

}  // namespace cwknn

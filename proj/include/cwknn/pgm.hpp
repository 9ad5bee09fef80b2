#pragma once

#include <filesystem>
#include <span>

#include "cwknn/image.hpp"

namespace cwknn {

/// Binary P5 with maxval 255 only. Header comments are skipped.
GrayImage read_pgm(std::span<const std::uint8_t> bytes);
/// Writes the canonical header "P5\n<w> <h>\n255\n" followed by the pixels.
Bytes write_pgm(const GrayImage& image);

GrayImage load_pgm(const std::filesystem::path& path);
void save_pgm(const GrayImage& image, const std::filesystem::path& path);

}  // namespace cwknn

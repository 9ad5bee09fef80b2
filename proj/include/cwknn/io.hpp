#pragma once

#include <filesystem>
#include <span>

#include "cwknn/image.hpp"

namespace cwknn {

Bytes read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::span<const std::uint8_t> bytes);

/// True when the buffer starts with the gzip magic 1f 8b.
bool is_gzip(std::span<const std::uint8_t> bytes) noexcept;
/// Returns the decompressed payload for gzip input, the input otherwise.
Bytes gunzip_if_needed(std::span<const std::uint8_t> bytes);
Bytes gzip(std::span<const std::uint8_t> bytes);

}  // namespace cwknn

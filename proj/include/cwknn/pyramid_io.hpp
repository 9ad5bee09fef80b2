#pragma once

#include <optional>
#include <span>

#include "cwknn/image.hpp"
#include "cwknn/steerable.hpp"

namespace cwknn {

// CWPYR1 record:
//   "CWPYR1\n"
//   u32 LE width, height, scales, orientations, decimated (0/1)
//   per subband (scale-major, orientation-minor), row-major:
//     f32 LE re, f32 LE im
// Residual bands are not stored.

inline constexpr char kPyramidMagic[] = "CWPYR1\n";
inline constexpr std::size_t kPyramidMagicSize = sizeof(kPyramidMagic) - 1;

std::size_t serialized_pyramid_size(std::size_t width, std::size_t height, const PyramidConfig& config);

Bytes serialize_pyramid(const Pyramid& pyramid);
void append_serialized_pyramid(Bytes& out, const Pyramid& pyramid);

/// Reads one record starting at `offset` and advances `offset` past it.
/// Throws ConfigMismatch when `expected` is given and the header differs.
Pyramid deserialize_pyramid(std::span<const std::uint8_t> bytes, std::size_t& offset,
                            const std::optional<PyramidConfig>& expected = std::nullopt);
Pyramid deserialize_pyramid(std::span<const std::uint8_t> bytes,
                            const std::optional<PyramidConfig>& expected = std::nullopt);

}  // namespace cwknn

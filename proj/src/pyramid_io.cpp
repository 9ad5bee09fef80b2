#include "cwknn/pyramid_io.hpp"

#include <bit>
#include <cstring>
#include <string>

#include "cwknn/error.hpp"

namespace cwknn {
namespace {

static_assert(std::endian::native == std::endian::little, "CWPYR1 I/O assumes a little-endian host");

void put_u32(Bytes& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

void put_f32(Bytes& out, float f) { put_u32(out, std::bit_cast<std::uint32_t>(f)); }

std::uint32_t get_u32(const std::uint8_t* p) {
  return std::uint32_t(p[0]) | (std::uint32_t(p[1]) << 8) | (std::uint32_t(p[2]) << 16) |
         (std::uint32_t(p[3]) << 24);
}

float get_f32(const std::uint8_t* p) { return std::bit_cast<float>(get_u32(p)); }

constexpr std::size_t kHeaderSize = kPyramidMagicSize + 5 * 4;

std::size_t payload_size(std::size_t width, std::size_t height, const PyramidConfig& config) {
  std::size_t total = 0;
  for (std::size_t s = 0; s < config.scales; ++s) {
    total += subband_extent(width, s, config.decimated) * subband_extent(height, s, config.decimated) *
             config.orientations * 8;
  }
  return total;
}

}  // namespace

std::size_t serialized_pyramid_size(std::size_t width, std::size_t height, const PyramidConfig& config) {
  return kHeaderSize + payload_size(width, height, config);
}

void append_serialized_pyramid(Bytes& out, const Pyramid& p) {
  out.reserve(out.size() + serialized_pyramid_size(p.width, p.height, p.config));
  out.insert(out.end(), kPyramidMagic, kPyramidMagic + kPyramidMagicSize);
  put_u32(out, static_cast<std::uint32_t>(p.width));
  put_u32(out, static_cast<std::uint32_t>(p.height));
  put_u32(out, static_cast<std::uint32_t>(p.config.scales));
  put_u32(out, static_cast<std::uint32_t>(p.config.orientations));
  put_u32(out, p.config.decimated ? 1u : 0u);
  if (p.subbands.size() != p.config.scales * p.config.orientations) {
    throw Error(ErrorCode::InvalidArgument, "pyramid subband count does not match its config");
  }
  for (const auto& band : p.subbands) {
    for (const auto& c : band.coeffs) {
      put_f32(out, static_cast<float>(c.real()));
      put_f32(out, static_cast<float>(c.imag()));
    }
  }
}

Bytes serialize_pyramid(const Pyramid& pyramid) {
  Bytes out;
  append_serialized_pyramid(out, pyramid);
  return out;
}

Pyramid deserialize_pyramid(std::span<const std::uint8_t> bytes, std::size_t& offset,
                            const std::optional<PyramidConfig>& expected) {
  const auto rest = bytes.subspan(std::min(offset, bytes.size()));
  if (rest.size() < kPyramidMagicSize || std::memcmp(rest.data(), kPyramidMagic, kPyramidMagicSize) != 0) {
    throw Error(ErrorCode::WrongMagic, "not a CWPYR1 record");
  }
  if (rest.size() < kHeaderSize) throw Error(ErrorCode::Truncated, "CWPYR1 header cut short");
  const std::uint8_t* h = rest.data() + kPyramidMagicSize;

  Pyramid p;
  p.width = get_u32(h);
  p.height = get_u32(h + 4);
  p.config.scales = get_u32(h + 8);
  p.config.orientations = get_u32(h + 12);
  const std::uint32_t decimated = get_u32(h + 16);
  if (decimated > 1) throw Error(ErrorCode::WrongMagic, "CWPYR1 decimated flag must be 0 or 1");
  p.config.decimated = decimated == 1;
  p.config.validate();
  if (p.width == 0 || p.height == 0) throw Error(ErrorCode::ZeroDim, "CWPYR1 with a zero dimension");
  if (expected && !(*expected == p.config)) {
    throw Error(ErrorCode::ConfigMismatch, "cached pyramid has " + p.config.canonical() + ", expected " +
                                               expected->canonical());
  }

  const std::size_t payload = payload_size(p.width, p.height, p.config);
  if (rest.size() - kHeaderSize < payload) {
    throw Error(ErrorCode::Truncated, "CWPYR1 payload needs " + std::to_string(payload) + " bytes, record has " +
                                          std::to_string(rest.size() - kHeaderSize));
  }
  const std::uint8_t* cursor = rest.data() + kHeaderSize;
  p.subbands.reserve(p.config.scales * p.config.orientations);
  for (std::size_t s = 0; s < p.config.scales; ++s) {
    for (std::size_t o = 0; o < p.config.orientations; ++o) {
      Subband band;
      band.scale = s;
      band.orientation = o;
      band.width = subband_extent(p.width, s, p.config.decimated);
      band.height = subband_extent(p.height, s, p.config.decimated);
      band.coeffs.resize(band.width * band.height);
      for (auto& c : band.coeffs) {
        c = Complex(get_f32(cursor), get_f32(cursor + 4));
        cursor += 8;
      }
      p.subbands.push_back(std::move(band));
    }
  }
  offset += kHeaderSize + payload;
  return p;
}

Pyramid deserialize_pyramid(std::span<const std::uint8_t> bytes, const std::optional<PyramidConfig>& expected) {
  std::size_t offset = 0;
  return deserialize_pyramid(bytes, offset, expected);
}

}  // namespace cwknn

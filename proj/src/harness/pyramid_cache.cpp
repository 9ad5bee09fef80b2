#include "cwknn/harness/pyramid_cache.hpp"

#include <algorithm>
#include <fstream>
#include <unordered_map>

#include "cwknn/error.hpp"
#include "cwknn/harness/run_config.hpp"
#include "cwknn/parallel.hpp"
#include "cwknn/pyramid_io.hpp"

namespace cwknn::harness {
namespace {

constexpr std::size_t kHeaderBytes = kPyramidMagicSize + 5 * 4;
constexpr std::size_t kAppendChunk = 256;

std::uint32_t get_u32(const std::uint8_t* p) {
  return std::uint32_t(p[0]) | (std::uint32_t(p[1]) << 8) | (std::uint32_t(p[2]) << 16) | (std::uint32_t(p[3]) << 24);
}

void put_u32(Bytes& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

}  // namespace

std::string dataset_id(std::span<const GrayImage> images) {
  std::uint64_t h = fnv1a("cwknn-dataset");
  const std::string shape = std::to_string(images.size()) + ":" +
                            (images.empty() ? std::string("0x0")
                                            : std::to_string(images.front().width()) + "x" +
                                                  std::to_string(images.front().height()));
  h = fnv1a(shape, h);
  for (const auto& img : images) {
    const Bytes b = img.to_bytes();
    h = fnv1a(std::string_view(reinterpret_cast<const char*>(b.data()), b.size()), h);
  }
  return hex64(h);
}

std::string config_hash(const PyramidConfig& config) { return hex64(fnv1a(config.canonical())); }

Pyramid cacheable_pyramid(const GrayImage& image, const PyramidConfig& config) {
  Pyramid p = quantize_to_float(decompose(image, config));
  p.highpass.clear();
  p.lowpass.clear();
  return p;
}

PyramidCache::PyramidCache(std::filesystem::path dir, std::string id, PyramidConfig config)
    : path_(std::move(dir) / (id + ".cwpyr")), config_(config) {}

void PyramidCache::fetch(std::span<const GrayImage> images, std::span<const std::size_t> indices,
                         std::size_t workers, const Sink& sink, Stats* stats) {
  std::unordered_map<std::size_t, std::vector<std::size_t>> wanted;  // image index -> positions
  for (std::size_t pos = 0; pos < indices.size(); ++pos) wanted[indices[pos]].push_back(pos);

  if (std::filesystem::exists(path_)) {
    std::ifstream in(path_, std::ios::binary);
    if (!in) throw Error(ErrorCode::Io, "cannot open cache " + path_.string());
    Bytes record;
    for (;;) {
      std::uint8_t index_bytes[4];
      in.read(reinterpret_cast<char*>(index_bytes), 4);
      if (in.gcount() == 0) break;
      if (in.gcount() != 4) throw Error(ErrorCode::Truncated, path_.string() + ": dangling entry index");
      const std::size_t index = get_u32(index_bytes);

      record.resize(kHeaderBytes);
      in.read(reinterpret_cast<char*>(record.data()), kHeaderBytes);
      record.resize(static_cast<std::size_t>(in.gcount()));
      std::size_t offset = 0;
      Pyramid header_only;
      PyramidConfig found;
      std::size_t width = 0, height = 0;
      if (record.size() >= kHeaderBytes) {
        width = get_u32(record.data() + kPyramidMagicSize);
        height = get_u32(record.data() + kPyramidMagicSize + 4);
        found.scales = get_u32(record.data() + kPyramidMagicSize + 8);
        found.orientations = get_u32(record.data() + kPyramidMagicSize + 12);
        found.decimated = get_u32(record.data() + kPyramidMagicSize + 16) == 1;
      }
      if (record.size() >= kHeaderBytes && !(found == config_)) {
        throw Error(ErrorCode::CacheConfigMismatch, path_.string() + " holds pyramids built with " +
                                                        found.canonical() + ", expected " + config_.canonical() +
                                                        "; delete it and rerun");
      }
      if (record.size() >= kHeaderBytes && !images.empty() &&
          (width != images.front().width() || height != images.front().height())) {
        throw Error(ErrorCode::CacheConfigMismatch, path_.string() + " holds pyramids of another image size; delete it");
      }
      const std::size_t full = serialized_pyramid_size(width, height, config_);
      const auto it = record.size() >= kHeaderBytes ? wanted.find(index) : wanted.end();
      if (it == wanted.end() && record.size() >= kHeaderBytes) {
        in.seekg(static_cast<std::streamoff>(full - kHeaderBytes), std::ios::cur);
        if (!in) throw Error(ErrorCode::Truncated, path_.string() + ": record payload cut short");
        continue;
      }
      record.resize(full > record.size() ? full : record.size());
      if (record.size() > kHeaderBytes) {
        in.read(reinterpret_cast<char*>(record.data() + kHeaderBytes),
                static_cast<std::streamsize>(record.size() - kHeaderBytes));
        record.resize(kHeaderBytes + static_cast<std::size_t>(in.gcount()));
      }
      // Throws WrongMagic / Truncated for damaged records.
      Pyramid p = deserialize_pyramid(record, offset, config_);
      const auto positions = std::move(it->second);
      wanted.erase(it);
      for (std::size_t i = 0; i + 1 < positions.size(); ++i) sink(positions[i], Pyramid(p));
      sink(positions.back(), std::move(p));
      if (stats) stats->hits += positions.size();
    }
  }

  std::vector<std::size_t> missing;
  missing.reserve(wanted.size());
  for (const auto& [index, positions] : wanted) missing.push_back(index);
  std::sort(missing.begin(), missing.end());
  if (missing.empty()) return;

  std::filesystem::create_directories(path_.parent_path());
  std::ofstream out(path_, std::ios::binary | std::ios::app);
  if (!out) throw Error(ErrorCode::Io, "cannot write cache " + path_.string());
  for (std::size_t begin = 0; begin < missing.size(); begin += kAppendChunk) {
    const std::size_t end = std::min(missing.size(), begin + kAppendChunk);
    std::vector<Pyramid> fresh(end - begin);
    parallel_for(fresh.size(), workers, [&](std::size_t i) {
      fresh[i] = cacheable_pyramid(images[missing[begin + i]], config_);
    });
    Bytes chunk;
    for (std::size_t i = 0; i < fresh.size(); ++i) {
      put_u32(chunk, static_cast<std::uint32_t>(missing[begin + i]));
      append_serialized_pyramid(chunk, fresh[i]);
    }
    out.write(reinterpret_cast<const char*>(chunk.data()), static_cast<std::streamsize>(chunk.size()));
    if (!out) throw Error(ErrorCode::Io, "short write to cache " + path_.string());
    for (std::size_t i = 0; i < fresh.size(); ++i) {
      const auto& positions = wanted.at(missing[begin + i]);
      for (std::size_t j = 0; j + 1 < positions.size(); ++j) sink(positions[j], Pyramid(fresh[i]));
      sink(positions.back(), std::move(fresh[i]));
      if (stats) stats->misses += positions.size();
    }
  }
}

}  // namespace cwknn::harness

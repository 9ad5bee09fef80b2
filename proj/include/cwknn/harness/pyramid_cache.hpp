#pragma once

#include <cstddef>
#include <filesystem>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cwknn/image.hpp"
#include "cwknn/steerable.hpp"

namespace cwknn::harness {

/// Identifier of a dataset's image content: FNV-1a over its shape and pixel bytes.
std::string dataset_id(std::span<const GrayImage> images);

/// Identifier of a pyramid configuration: FNV-1a over PyramidConfig::canonical().
std::string config_hash(const PyramidConfig& config);

/// Decomposition cache for one dataset, stored at `<dir>/<dataset-id>.cwpyr`
/// as a sequence of entries
///   u32 LE image index, CWPYR1 record
/// Entries are appended as new images are requested. Every record header
/// carries its pyramid config, so a file written under other parameters is
/// detected and refused rather than silently mixed.
class PyramidCache {
 public:
  struct Stats {
    std::size_t hits = 0;
    std::size_t misses = 0;
  };

  PyramidCache(std::filesystem::path dir, std::string dataset_id, PyramidConfig config);

  const std::filesystem::path& path() const noexcept { return path_; }

  /// Receives the float-rounded pyramid for indices[position].
  using Sink = std::function<void(std::size_t position, Pyramid&& pyramid)>;

  /// Delivers a pyramid for every entry of `indices` (indices into `images`),
  /// reading what the cache holds and decomposing and appending the rest.
  /// `sink` may be called concurrently for distinct positions. Throws
  /// CacheConfigMismatch when the file holds records for another config or
  /// image size.
  void fetch(std::span<const GrayImage> images, std::span<const std::size_t> indices, std::size_t workers,
             const Sink& sink, Stats* stats = nullptr);

 private:
  std::filesystem::path path_;
  PyramidConfig config_;
};

/// Float-rounded pyramid without residual bands: the form the cache stores.
Pyramid cacheable_pyramid(const GrayImage& image, const PyramidConfig& config);

}  // namespace cwknn::harness

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "cwknn/classifier.hpp"
#include "cwknn/similarity.hpp"

namespace cwknn::harness {

struct RunConfig {
  std::filesystem::path train_images;
  std::filesystem::path train_labels;
  std::filesystem::path test_images;  // unused in repeated-trials mode
  std::filesystem::path test_labels;

  std::size_t train_subset = 0;  // 0 = whole file
  std::size_t test_subset = 0;   // 0 = whole file; held-out count per trial when trials > 1
  std::uint64_t seed = 1;
  std::size_t trials = 1;

  std::size_t k_max = 20;
  std::string schemes = "unweighted,weighted";
  std::optional<std::size_t> truncate_at;

  CwSsimConfig cwssim;

  std::optional<std::filesystem::path> cache_dir;
  std::size_t workers = 1;

  std::optional<std::filesystem::path> out_csv;
  std::optional<std::filesystem::path> out_svg;
  std::optional<std::filesystem::path> pred_log;
  std::optional<std::filesystem::path> out_report;

  bool repeated_trials() const noexcept { return trials > 1; }
  void validate() const;
};

/// Expands a comma list of unweighted, weighted, exp:SIGMA, gauss:SIGMA into
/// vote schemes. The k-NN entries become one row per k in [1, k_max].
std::vector<VoteScheme> parse_schemes(const std::string& list, std::size_t k_max,
                                      std::optional<std::size_t> truncate_at = std::nullopt);

/// Turns a flat `key = value` file into command-line tokens `--key value`.
/// Blank lines and lines starting with '#' are skipped; a value of "true"
/// yields a bare `--key` and "false" drops the key.
std::vector<std::string> config_file_arguments(const std::filesystem::path& path);

/// 64-bit FNV-1a.
std::uint64_t fnv1a(std::string_view bytes, std::uint64_t hash = 0xcbf29ce484222325ull);
std::string hex64(std::uint64_t v);

}  // namespace cwknn::harness

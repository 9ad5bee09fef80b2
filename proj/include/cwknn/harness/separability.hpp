#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

#include "cwknn/harness/run_config.hpp"

namespace cwknn::harness {

struct Quartiles {
  std::size_t count = 0;
  double min = 0.0;
  double q1 = 0.0;
  double median = 0.0;
  double q3 = 0.0;
  double max = 0.0;
};

/// Order-statistic summary with linear interpolation between ranks:
/// q(p) = x[floor(h)] + (h - floor(h)) (x[floor(h)+1] - x[floor(h)]), h = (n-1) p.
Quartiles quartiles(std::span<const double> values);

struct SeparabilityRow {
  std::size_t test_index = 0;
  Label test_digit = 0;
  Label train_digit = 0;
  Quartiles scores;
};

struct RawScore {
  std::size_t test_index = 0;
  Label test_digit = 0;
  std::size_t train_index = 0;
  Label train_digit = 0;
  double score = 0.0;
};

struct SeparabilityReport {
  std::vector<SeparabilityRow> rows;
  std::vector<RawScore> raw;
  std::size_t sampled = 0;
  /// Sampled test images whose same-digit median beats every other digit's median.
  std::size_t separated = 0;
};

/// Scores `samples_per_digit` randomly chosen test images of each digit
/// against the seeded training subset and summarises the scores per
/// (test image, training digit).
SeparabilityReport run_separability(const RunConfig& cfg, std::size_t samples_per_digit);

/// test_index,test_digit,train_digit,count,min,q1,median,q3,max
void write_separability_csv(std::ostream& out, const SeparabilityReport& report);
/// test_index,test_digit,train_index,train_digit,score
void write_raw_scores_csv(std::ostream& out, const SeparabilityReport& report);

}  // namespace cwknn::harness

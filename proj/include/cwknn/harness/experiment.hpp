#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "cwknn/classifier.hpp"
#include "cwknn/harness/pyramid_cache.hpp"
#include "cwknn/harness/run_config.hpp"

namespace cwknn::harness {

struct TrialResult {
  ErrorTable table;
  std::size_t train_count = 0;
  std::size_t test_count = 0;
  std::size_t pairs_scored = 0;
  double scoring_seconds = 0.0;
};

/// One scheme row pooled over trials. With equal test counts per trial the
/// pooled rate is the mean of the per-trial rates.
struct SummaryRow {
  std::string scheme;
  double parameter = 0.0;
  std::size_t errors = 0;
  std::size_t total = 0;
  double rate_min = 0.0;
  double rate_max = 0.0;

  double error_rate() const noexcept { return total == 0 ? 0.0 : static_cast<double>(errors) / total; }
};

/// Prediction with indices into the source files rather than the subsets.
struct LoggedPrediction {
  std::size_t trial = 0;
  std::size_t test_index = 0;
  Label true_label = 0;
  Label predicted = 0;
  std::string scheme;
  double parameter = 0.0;
  std::size_t rank1_index = 0;
  double rank1_score = 0.0;
};

struct RunReport {
  RunConfig config;
  std::vector<VoteScheme> schemes;
  std::vector<TrialResult> trials;
  std::vector<SummaryRow> summary;
  std::vector<LoggedPrediction> predictions;
  PyramidCache::Stats cache;
  double decompose_seconds = 0.0;
  double wall_seconds = 0.0;
  std::size_t pairs_scored = 0;

  double pairs_per_second() const noexcept;
  ErrorTable summary_table() const;
  /// Lowest-error row of `scheme` with parameter in [lo, hi]; ties go to the
  /// smaller parameter.
  std::optional<SummaryRow> best(const std::string& scheme, double lo, double hi) const;
  std::optional<SummaryRow> find(const std::string& scheme, double parameter) const;
};

/// Draws subsets by seed, decomposes (through the cache when configured),
/// ranks each test image once, tabulates every scheme row and writes the
/// configured CSV, SVG, prediction log and JSON report.
///
/// Single-trial mode draws `train_subset` images from the train file and
/// `test_subset` from the test file. Repeated-trials mode draws a pool of
/// `train_subset` images from the train file and, per trial, holds out
/// `test_subset` of them for testing.
RunReport run_eval(const RunConfig& cfg);

/// scheme,param,errors,total,error_rate,trial_min,trial_max
void write_summary_csv(std::ostream& out, const RunReport& report);
/// test_index,true_label,predicted,scheme,k_or_sigma,rank1_index,rank1_score
void write_prediction_csv(std::ostream& out, const RunReport& report);
/// Config echo, per-trial tables, timings, cache statistics, throughput.
std::string report_json(const RunReport& report);

}  // namespace cwknn::harness

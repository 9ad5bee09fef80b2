#include "cwknn/harness/separability.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <optional>
#include <ostream>

#include "cwknn/error.hpp"
#include "cwknn/harness/pyramid_cache.hpp"
#include "cwknn/idx.hpp"
#include "cwknn/parallel.hpp"
#include "cwknn/rng.hpp"

namespace cwknn::harness {
namespace {

double at_fraction(const std::vector<double>& sorted, double p) {
  const double h = (sorted.size() - 1) * p;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  if (lo + 1 >= sorted.size()) return sorted[lo];
  return sorted[lo] + (h - lo) * (sorted[lo + 1] - sorted[lo]);
}

std::vector<ScoringPyramid> scoring_pyramids(const LabeledSet& set, std::span<const std::size_t> ids,
                                             const RunConfig& cfg) {
  std::vector<ScoringPyramid> out(ids.size());
  if (cfg.cache_dir) {
    PyramidCache cache(*cfg.cache_dir, dataset_id(set.images), cfg.cwssim.pyramid);
    cache.fetch(set.images, ids, cfg.workers,
                [&](std::size_t pos, Pyramid&& p) { out[pos] = ScoringPyramid(p, cfg.cwssim); });
  } else {
    parallel_for(ids.size(), cfg.workers, [&](std::size_t i) {
      out[i] = ScoringPyramid(cacheable_pyramid(set.images[ids[i]], cfg.cwssim.pyramid), cfg.cwssim);
    });
  }
  return out;
}

}  // namespace

Quartiles quartiles(std::span<const double> values) {
  if (values.empty()) throw Error(ErrorCode::InvalidArgument, "quartiles of an empty sample");
  std::vector<double> v(values.begin(), values.end());
  std::sort(v.begin(), v.end());
  return Quartiles{v.size(), v.front(), at_fraction(v, 0.25), at_fraction(v, 0.5), at_fraction(v, 0.75), v.back()};
}

SeparabilityReport run_separability(const RunConfig& cfg, std::size_t samples_per_digit) {
  if (samples_per_digit < 1) throw Error(ErrorCode::InvalidArgument, "samples per digit must be at least 1");
  if (cfg.train_images.empty() || cfg.train_labels.empty() || cfg.test_images.empty() || cfg.test_labels.empty()) {
    throw Error(ErrorCode::InvalidArgument, "train and test images and labels are required");
  }
  if (cfg.workers < 1) throw Error(ErrorCode::InvalidArgument, "workers must be at least 1");
  cfg.cwssim.validate();

  const LabeledSet train = load_labeled_set(cfg.train_images, cfg.train_labels);
  const LabeledSet test = load_labeled_set(cfg.test_images, cfg.test_labels);
  if (cfg.train_subset > train.size()) {
    throw Error(ErrorCode::InvalidArgument, "train subset exceeds the training file");
  }

  SplitMix64 rng(cfg.seed);
  std::vector<std::size_t> train_ids;
  if (cfg.train_subset == 0) {
    for (std::size_t i = 0; i < train.size(); ++i) train_ids.push_back(i);
  } else {
    train_ids = sample_without_replacement(train.size(), cfg.train_subset, rng);
  }

  std::vector<std::size_t> test_ids;
  for (Label d = 0; d < 10; ++d) {
    std::vector<std::size_t> of_digit;
    for (std::size_t i = 0; i < test.size(); ++i) {
      if (test.labels[i] == d) of_digit.push_back(i);
    }
    const std::size_t take = std::min(samples_per_digit, of_digit.size());
    for (auto p : sample_without_replacement(of_digit.size(), take, rng)) test_ids.push_back(of_digit[p]);
  }

  const auto train_pyr = scoring_pyramids(train, train_ids, cfg);
  const auto test_pyr = scoring_pyramids(test, test_ids, cfg);

  std::vector<std::vector<double>> scores(test_ids.size(), std::vector<double>(train_ids.size()));
  parallel_for(test_ids.size(), cfg.workers, [&](std::size_t t) {
    for (std::size_t j = 0; j < train_ids.size(); ++j) scores[t][j] = cwssim_score(test_pyr[t], train_pyr[j]);
  });

  SeparabilityReport report;
  report.sampled = test_ids.size();
  for (std::size_t t = 0; t < test_ids.size(); ++t) {
    const Label digit = test.labels[test_ids[t]];
    std::array<std::vector<double>, 10> by_digit;
    for (std::size_t j = 0; j < train_ids.size(); ++j) {
      const Label td = train.labels[train_ids[j]];
      by_digit[td].push_back(scores[t][j]);
      report.raw.push_back(RawScore{test_ids[t], digit, train_ids[j], td, scores[t][j]});
    }
    std::optional<double> own;
    double best_other = -1.0;
    for (Label d = 0; d < 10; ++d) {
      if (by_digit[d].empty()) continue;
      const Quartiles q = quartiles(by_digit[d]);
      report.rows.push_back(SeparabilityRow{test_ids[t], digit, d, q});
      if (d == digit) {
        own = q.median;
      } else {
        best_other = std::max(best_other, q.median);
      }
    }
    if (own && *own > best_other) ++report.separated;
  }
  return report;
}

void write_separability_csv(std::ostream& out, const SeparabilityReport& report) {
  out << "test_index,test_digit,train_digit,count,min,q1,median,q3,max\n";
  char buf[160];
  for (const auto& r : report.rows) {
    const auto& q = r.scores;
    std::snprintf(buf, sizeof(buf), "%.6f,%.6f,%.6f,%.6f,%.6f", q.min, q.q1, q.median, q.q3, q.max);
    out << r.test_index << ',' << int(r.test_digit) << ',' << int(r.train_digit) << ',' << q.count << ',' << buf
        << '\n';
  }
}

void write_raw_scores_csv(std::ostream& out, const SeparabilityReport& report) {
  out << "test_index,test_digit,train_index,train_digit,score\n";
  char buf[40];
  for (const auto& r : report.raw) {
    std::snprintf(buf, sizeof(buf), "%.17g", r.score);
    out << r.test_index << ',' << int(r.test_digit) << ',' << r.train_index << ',' << int(r.train_digit) << ','
        << buf << '\n';
  }
}

}  // namespace cwknn::harness

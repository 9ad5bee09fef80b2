#include "cwknn/harness/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <ostream>

#include "json.hpp"

#include "cwknn/error.hpp"
#include "cwknn/harness/chart.hpp"
#include "cwknn/idx.hpp"
#include "cwknn/parallel.hpp"
#include "cwknn/rng.hpp"

namespace cwknn::harness {
namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::vector<std::size_t> draw(std::size_t available, std::size_t wanted, SplitMix64& rng, const char* what) {
  if (wanted > available) {
    throw Error(ErrorCode::InvalidArgument, std::string(what) + " subset of " + std::to_string(wanted) +
                                                " exceeds the " + std::to_string(available) + " images available");
  }
  if (wanted == 0) {
    std::vector<std::size_t> all(available);
    std::iota(all.begin(), all.end(), std::size_t{0});
    return all;
  }
  return sample_without_replacement(available, wanted, rng);
}

/// Scoring pyramids for images[indices], through the cache when configured.
std::vector<ScoringPyramid> prepare(const LabeledSet& set, std::span<const std::size_t> indices,
                                    const RunConfig& cfg, PyramidCache::Stats& stats) {
  std::vector<ScoringPyramid> out(indices.size());
  const auto& pc = cfg.cwssim.pyramid;
  if (cfg.cache_dir) {
    PyramidCache cache(*cfg.cache_dir, dataset_id(set.images), pc);
    cache.fetch(set.images, indices, cfg.workers,
                [&](std::size_t pos, Pyramid&& p) { out[pos] = ScoringPyramid(p, cfg.cwssim); }, &stats);
  } else {
    parallel_for(indices.size(), cfg.workers, [&](std::size_t i) {
      out[i] = ScoringPyramid(cacheable_pyramid(set.images[indices[i]], pc), cfg.cwssim);
    });
  }
  return out;
}

std::vector<Label> labels_of(const LabeledSet& set, std::span<const std::size_t> indices) {
  std::vector<Label> out;
  out.reserve(indices.size());
  for (auto i : indices) out.push_back(set.labels[i]);
  return out;
}

template <typename T>
std::vector<T> pick(const std::vector<T>& from, std::span<const std::size_t> positions) {
  std::vector<T> out;
  out.reserve(positions.size());
  for (auto p : positions) out.push_back(from[p]);
  return out;
}

std::string fixed6(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return buf;
}

void record_trial(RunReport& report, std::size_t trial, const Evaluation& ev,
                  std::span<const std::size_t> test_ids, std::span<const std::size_t> train_ids) {
  TrialResult tr;
  tr.table = ev.table;
  tr.train_count = train_ids.size();
  tr.test_count = test_ids.size();
  tr.pairs_scored = ev.pairs_scored;
  tr.scoring_seconds = ev.seconds;
  report.pairs_scored += ev.pairs_scored;
  report.trials.push_back(std::move(tr));
  for (const auto& p : ev.predictions) {
    const auto& row = ev.table[p.row];
    report.predictions.push_back(LoggedPrediction{trial, test_ids[p.test_index], p.true_label, p.predicted, row.scheme,
                                                  row.parameter, train_ids[p.rank1_index], p.rank1_score});
  }
}

void pool_trials(RunReport& report) {
  const auto& first = report.trials.front().table;
  report.summary.clear();
  for (std::size_t r = 0; r < first.size(); ++r) {
    SummaryRow s{first[r].scheme, first[r].parameter, 0, 0, 1.0, 0.0};
    for (const auto& t : report.trials) {
      const auto& row = t.table[r];
      s.errors += row.errors;
      s.total += row.total;
      s.rate_min = std::min(s.rate_min, row.error_rate());
      s.rate_max = std::max(s.rate_max, row.error_rate());
    }
    report.summary.push_back(s);
  }
}

template <typename Fn>
void write_text(const std::filesystem::path& path, Fn&& fn) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::Io, "cannot write " + path.string());
  fn(out);
  if (!out) throw Error(ErrorCode::Io, "short write to " + path.string());
}

void write_outputs(const RunReport& report) {
  const auto& cfg = report.config;
  if (cfg.out_csv) write_text(*cfg.out_csv, [&](std::ostream& o) { write_summary_csv(o, report); });
  if (cfg.out_svg) write_text(*cfg.out_svg, [&](std::ostream& o) { o << emit_chart(report.summary_table()); });
  if (cfg.pred_log) write_text(*cfg.pred_log, [&](std::ostream& o) { write_prediction_csv(o, report); });
  if (cfg.out_report) write_text(*cfg.out_report, [&](std::ostream& o) { o << report_json(report) << '\n'; });
}

}  // namespace

double RunReport::pairs_per_second() const noexcept {
  double seconds = 0.0;
  for (const auto& t : trials) seconds += t.scoring_seconds;
  return seconds > 0.0 ? pairs_scored / seconds : 0.0;
}

ErrorTable RunReport::summary_table() const {
  ErrorTable table;
  for (const auto& s : summary) table.push_back(ErrorRow{s.scheme, s.parameter, s.errors, s.total});
  return table;
}

std::optional<SummaryRow> RunReport::best(const std::string& scheme, double lo, double hi) const {
  std::optional<SummaryRow> out;
  for (const auto& s : summary) {
    if (s.scheme != scheme || s.parameter < lo || s.parameter > hi) continue;
    if (!out || s.error_rate() < out->error_rate() ||
        (s.error_rate() == out->error_rate() && s.parameter < out->parameter)) {
      out = s;
    }
  }
  return out;
}

std::optional<SummaryRow> RunReport::find(const std::string& scheme, double parameter) const {
  for (const auto& s : summary) {
    if (s.scheme == scheme && s.parameter == parameter) return s;
  }
  return std::nullopt;
}

RunReport run_eval(const RunConfig& cfg) {
  cfg.validate();
  const auto wall = Clock::now();
  RunReport report;
  report.config = cfg;
  report.schemes = parse_schemes(cfg.schemes, cfg.k_max, cfg.truncate_at);

  const LabeledSet train = load_labeled_set(cfg.train_images, cfg.train_labels);
  SplitMix64 rng(cfg.seed);

  if (!cfg.repeated_trials()) {
    const LabeledSet test = load_labeled_set(cfg.test_images, cfg.test_labels);
    const auto train_ids = draw(train.size(), cfg.train_subset, rng, "train");
    const auto test_ids = draw(test.size(), cfg.test_subset, rng, "test");

    const auto t0 = Clock::now();
    auto train_pyr = prepare(train, train_ids, cfg, report.cache);
    auto test_pyr = prepare(test, test_ids, cfg, report.cache);
    report.decompose_seconds = seconds_since(t0);

    const TrainingCorpus corpus(std::move(train_pyr), labels_of(train, train_ids));
    const auto ev = evaluate(test_pyr, labels_of(test, test_ids), corpus, report.schemes, cfg.workers);
    record_trial(report, 0, ev, test_ids, train_ids);
  } else {
    const auto pool_ids = draw(train.size(), cfg.train_subset, rng, "train");
    if (cfg.test_subset >= pool_ids.size()) {
      throw Error(ErrorCode::InvalidArgument, "held-out count must leave at least one training image");
    }
    const auto t0 = Clock::now();
    const auto pool_pyr = prepare(train, pool_ids, cfg, report.cache);
    const auto pool_labels = labels_of(train, pool_ids);
    report.decompose_seconds = seconds_since(t0);

    for (std::size_t trial = 0; trial < cfg.trials; ++trial) {
      const auto order = sample_without_replacement(pool_ids.size(), pool_ids.size(), rng);
      const std::span<const std::size_t> test_pos(order.data(), cfg.test_subset);
      const std::span<const std::size_t> train_pos(order.data() + cfg.test_subset, order.size() - cfg.test_subset);

      const TrainingCorpus corpus(pick(pool_pyr, train_pos), pick(pool_labels, train_pos));
      const auto test_pyr = pick(pool_pyr, test_pos);
      const auto ev = evaluate(test_pyr, pick(pool_labels, test_pos), corpus, report.schemes, cfg.workers);
      record_trial(report, trial, ev, pick(pool_ids, test_pos), pick(pool_ids, train_pos));
    }
  }

  pool_trials(report);
  report.wall_seconds = seconds_since(wall);
  write_outputs(report);
  return report;
}

void write_summary_csv(std::ostream& out, const RunReport& report) {
  out << "scheme,param,errors,total,error_rate,trial_min,trial_max\n";
  for (const auto& s : report.summary) {
    out << s.scheme << ',' << format_parameter(s.parameter) << ',' << s.errors << ',' << s.total << ','
        << fixed6(s.error_rate()) << ',' << fixed6(s.rate_min) << ',' << fixed6(s.rate_max) << '\n';
  }
}

void write_prediction_csv(std::ostream& out, const RunReport& report) {
  const bool trials = report.config.repeated_trials();
  if (trials) out << "trial,";
  out << "test_index,true_label,predicted,scheme,k_or_sigma,rank1_index,rank1_score\n";
  for (const auto& p : report.predictions) {
    if (trials) out << p.trial << ',';
    out << p.test_index << ',' << int(p.true_label) << ',' << int(p.predicted) << ',' << p.scheme << ','
        << format_parameter(p.parameter) << ',' << p.rank1_index << ',' << fixed6(p.rank1_score) << '\n';
  }
}

std::string report_json(const RunReport& report) {
  using nlohmann::ordered_json;
  const auto& cfg = report.config;
  auto opt_path = [](const std::optional<std::filesystem::path>& p) {
    return p ? ordered_json(p->string()) : ordered_json(nullptr);
  };
  ordered_json config = {
      {"train_images", cfg.train_images.string()},
      {"train_labels", cfg.train_labels.string()},
      {"test_images", cfg.test_images.string()},
      {"test_labels", cfg.test_labels.string()},
      {"train_subset", cfg.train_subset},
      {"test_subset", cfg.test_subset},
      {"seed", cfg.seed},
      {"trials", cfg.trials},
      {"k_max", cfg.k_max},
      {"schemes", cfg.schemes},
      {"truncate_at", cfg.truncate_at ? ordered_json(*cfg.truncate_at) : ordered_json(nullptr)},
      {"cwssim", cfg.cwssim.canonical()},
      {"pyramid_hash", config_hash(cfg.cwssim.pyramid)},
      {"cache_dir", opt_path(cfg.cache_dir)},
      {"workers", cfg.workers},
  };
  auto table_json = [](const ErrorTable& table) {
    ordered_json rows = ordered_json::array();
    for (const auto& r : table) {
      rows.push_back({{"scheme", r.scheme},
                      {"param", r.parameter},
                      {"errors", r.errors},
                      {"total", r.total},
                      {"error_rate", r.error_rate()}});
    }
    return rows;
  };
  ordered_json summary = ordered_json::array();
  for (const auto& s : report.summary) {
    summary.push_back({{"scheme", s.scheme},
                       {"param", s.parameter},
                       {"errors", s.errors},
                       {"total", s.total},
                       {"error_rate", s.error_rate()},
                       {"trial_min", s.rate_min},
                       {"trial_max", s.rate_max}});
  }
  ordered_json trials = ordered_json::array();
  for (const auto& t : report.trials) {
    trials.push_back({{"train_count", t.train_count},
                      {"test_count", t.test_count},
                      {"pairs_scored", t.pairs_scored},
                      {"scoring_seconds", t.scoring_seconds},
                      {"table", table_json(t.table)}});
  }
  const ordered_json doc = {
      {"config", config},
      {"summary", summary},
      {"trials", trials},
      {"timings", {{"decompose_seconds", report.decompose_seconds}, {"wall_seconds", report.wall_seconds}}},
      {"cache", {{"hits", report.cache.hits}, {"misses", report.cache.misses}}},
      {"pairs_scored", report.pairs_scored},
      {"pairs_per_second", report.pairs_per_second()},
  };
  return doc.dump(2);
}

}  // namespace cwknn::harness

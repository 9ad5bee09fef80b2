#include "cwknn/classifier.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ostream>

#include "cwknn/error.hpp"
#include "cwknn/parallel.hpp"

namespace cwknn {
namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

bool ranks_before(const Neighbor& a, const Neighbor& b) {
  if (a.score != b.score) return a.score > b.score;
  return a.train_index < b.train_index;
}

}  // namespace

void validate(const VoteScheme& scheme) {
  std::visit(Overloaded{
                 [](const Unweighted& s) {
                   if (s.k < 1) throw Error(ErrorCode::InvalidArgument, "k must be at least 1");
                 },
                 [](const ScoreWeighted& s) {
                   if (s.k < 1) throw Error(ErrorCode::InvalidArgument, "k must be at least 1");
                 },
                 [](const Decayed& s) {
                   if (!(s.sigma > 0.0) || !std::isfinite(s.sigma)) {
                     throw Error(ErrorCode::InvalidArgument, "sigma must be positive");
                   }
                   if (s.truncate_at && *s.truncate_at < 1) {
                     throw Error(ErrorCode::InvalidArgument, "truncate_at must be at least 1");
                   }
                 },
             },
             scheme);
}

std::string scheme_name(const VoteScheme& scheme) {
  return std::visit(Overloaded{
                        [](const Unweighted&) -> std::string { return "unweighted"; },
                        [](const ScoreWeighted&) -> std::string { return "weighted"; },
                        [](const Decayed& d) -> std::string {
                          return d.kind == DecayKind::Exponential ? "exp" : "gauss";
                        },
                    },
                    scheme);
}

double scheme_parameter(const VoteScheme& scheme) {
  return std::visit(Overloaded{
                        [](const Unweighted& s) { return static_cast<double>(s.k); },
                        [](const ScoreWeighted& s) { return static_cast<double>(s.k); },
                        [](const Decayed& d) { return d.sigma; },
                    },
                    scheme);
}

std::size_t ranks_needed(const VoteScheme& scheme) {
  return std::visit(Overloaded{
                        [](const Unweighted& s) { return s.k; },
                        [](const ScoreWeighted& s) { return s.k; },
                        [](const Decayed& d) { return d.truncate_at.value_or(decay_cutoff(d.sigma, d.kind)); },
                    },
                    scheme);
}

double decay_weight(std::size_t rank, double sigma, DecayKind kind) {
  const double d = static_cast<double>(rank) - 1.0;
  return kind == DecayKind::Exponential ? std::exp(-d / sigma) : std::exp(-(d * d) / sigma);
}

std::size_t decay_cutoff(double sigma, DecayKind kind, double min_weight) {
  const double budget = -std::log(min_weight) * sigma;
  const double span = kind == DecayKind::Exponential ? budget : std::sqrt(budget);
  std::size_t rank = 1 + static_cast<std::size_t>(std::max(0.0, std::floor(span)));
  while (rank > 1 && decay_weight(rank, sigma, kind) < min_weight) --rank;
  while (decay_weight(rank + 1, sigma, kind) >= min_weight) ++rank;
  return rank;
}

VoteResult vote(std::span<const Neighbor> neighbors, const VoteScheme& scheme) {
  validate(scheme);
  std::array<double, 10> weight{};
  std::array<double, 10> raw{};
  std::array<bool, 10> present{};

  auto add = [&](const Neighbor& n, double w) {
    if (n.label > 9) throw Error(ErrorCode::BadLabel, "neighbour label " + std::to_string(n.label));
    weight[n.label] += w;
    raw[n.label] += n.score;
    present[n.label] = true;
  };
  auto need = [&](std::size_t k) {
    if (neighbors.size() < k) {
      throw Error(ErrorCode::NotEnoughNeighbors, "scheme needs " + std::to_string(k) + " neighbours, have " +
                                                     std::to_string(neighbors.size()));
    }
  };

  std::visit(Overloaded{
                 [&](const Unweighted& s) {
                   need(s.k);
                   for (std::size_t i = 0; i < s.k; ++i) add(neighbors[i], 1.0);
                 },
                 [&](const ScoreWeighted& s) {
                   need(s.k);
                   for (std::size_t i = 0; i < s.k; ++i) add(neighbors[i], neighbors[i].score);
                 },
                 [&](const Decayed& d) {
                   need(1);
                   const std::size_t n = std::min(ranks_needed(d), neighbors.size());
                   for (std::size_t i = 0; i < n; ++i) {
                     add(neighbors[i], decay_weight(i + 1, d.sigma, d.kind) * neighbors[i].score);
                   }
                 },
             },
             scheme);

  VoteResult result;
  result.tally = weight;
  int best = -1;
  for (int c = 0; c < 10; ++c) {
    if (!present[c]) continue;
    if (best < 0 || weight[c] > weight[best] || (weight[c] == weight[best] && raw[c] > raw[best])) best = c;
  }
  result.label = static_cast<Label>(best);
  return result;
}

TrainingCorpus::TrainingCorpus(std::vector<ScoringPyramid> pyramids, std::vector<Label> labels)
    : pyramids_(std::move(pyramids)), labels_(std::move(labels)) {
  if (pyramids_.size() != labels_.size()) {
    throw Error(ErrorCode::LengthMismatch, "corpus pyramids and labels differ in count");
  }
  for (const auto& p : pyramids_) {
    if (!(p.config() == pyramids_.front().config()) || p.width() != pyramids_.front().width() ||
        p.height() != pyramids_.front().height()) {
      throw Error(ErrorCode::ConfigMismatch, "corpus mixes pyramid configs or sizes");
    }
  }
}

TrainingCorpus TrainingCorpus::build(const LabeledSet& train, const CwSsimConfig& cfg, std::size_t workers) {
  train.validate();
  std::vector<ScoringPyramid> pyramids(train.size());
  parallel_for(train.size(), workers, [&](std::size_t i) {
    pyramids[i] = ScoringPyramid(decompose(train.images[i], cfg.pyramid), cfg);
  });
  return TrainingCorpus(std::move(pyramids), train.labels);
}

std::vector<Neighbor> rank_scores(std::span<const double> scores, std::span<const Label> labels, std::size_t top) {
  if (scores.size() != labels.size()) throw Error(ErrorCode::LengthMismatch, "scores and labels differ in count");
  if (scores.empty()) throw Error(ErrorCode::EmptyCorpus, "nothing to rank");
  std::vector<Neighbor> all(scores.size());
  for (std::size_t i = 0; i < scores.size(); ++i) all[i] = Neighbor{i, labels[i], scores[i]};
  const std::size_t keep = top == 0 ? all.size() : std::min(top, all.size());
  std::partial_sort(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(keep), all.end(), ranks_before);
  all.resize(keep);
  return all;
}

std::vector<Neighbor> rank_neighbors(const ScoringPyramid& test, const TrainingCorpus& corpus, std::size_t top) {
  if (corpus.empty()) throw Error(ErrorCode::EmptyCorpus, "training corpus is empty");
  if (!(test.config() == corpus.config())) {
    throw Error(ErrorCode::ConfigMismatch, "test pyramid config differs from the corpus");
  }
  std::vector<double> scores(corpus.size());
  for (std::size_t i = 0; i < corpus.size(); ++i) scores[i] = cwssim_score(test, corpus.pyramid(i));
  return rank_scores(scores, corpus.labels(), top);
}

Label classify(const GrayImage& test, const TrainingCorpus& corpus, const VoteScheme& scheme) {
  if (corpus.empty()) throw Error(ErrorCode::EmptyCorpus, "training corpus is empty");
  const auto& cfg = corpus.config();
  const ScoringPyramid probe(decompose(test, cfg.pyramid), cfg);
  return vote(rank_neighbors(probe, corpus, ranks_needed(scheme)), scheme).label;
}

Evaluation evaluate(std::span<const ScoringPyramid> tests, std::span<const Label> test_labels,
                    const TrainingCorpus& corpus, std::span<const VoteScheme> schemes, std::size_t workers) {
  if (tests.size() != test_labels.size()) throw Error(ErrorCode::LengthMismatch, "test pyramids and labels differ");
  if (corpus.empty()) throw Error(ErrorCode::EmptyCorpus, "training corpus is empty");
  if (schemes.empty()) throw Error(ErrorCode::InvalidArgument, "no vote schemes requested");
  std::size_t depth = 1;
  for (const auto& s : schemes) {
    validate(s);
    depth = std::max(depth, ranks_needed(s));
  }
  for (const auto& s : schemes) {
    if (!std::holds_alternative<Decayed>(s) && ranks_needed(s) > corpus.size()) {
      throw Error(ErrorCode::NotEnoughNeighbors, "k exceeds the training corpus size");
    }
  }

  const auto start = std::chrono::steady_clock::now();
  Evaluation ev;
  ev.predictions.resize(tests.size() * schemes.size());
  parallel_for(tests.size(), workers, [&](std::size_t t) {
    const auto ranking = rank_neighbors(tests[t], corpus, depth);
    for (std::size_t r = 0; r < schemes.size(); ++r) {
      Prediction& p = ev.predictions[t * schemes.size() + r];
      p.test_index = t;
      p.true_label = test_labels[t];
      p.predicted = vote(ranking, schemes[r]).label;
      p.row = r;
      p.rank1_index = ranking.front().train_index;
      p.rank1_score = ranking.front().score;
    }
  });
  ev.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  ev.pairs_scored = tests.size() * corpus.size();

  ev.table.resize(schemes.size());
  for (std::size_t r = 0; r < schemes.size(); ++r) {
    ev.table[r].scheme = scheme_name(schemes[r]);
    ev.table[r].parameter = scheme_parameter(schemes[r]);
    ev.table[r].total = tests.size();
  }
  for (const auto& p : ev.predictions) {
    if (p.predicted != p.true_label) ++ev.table[p.row].errors;
  }
  return ev;
}

Evaluation evaluate(const LabeledSet& test, const LabeledSet& train, std::span<const VoteScheme> schemes,
                    const CwSsimConfig& cfg, std::size_t workers) {
  test.validate();
  const auto corpus = TrainingCorpus::build(train, cfg, workers);
  std::vector<ScoringPyramid> probes(test.size());
  parallel_for(test.size(), workers, [&](std::size_t i) {
    probes[i] = ScoringPyramid(decompose(test.images[i], cfg.pyramid), cfg);
  });
  return evaluate(probes, test.labels, corpus, schemes, workers);
}

std::string format_parameter(double parameter) {
  char buf[32];
  if (parameter == std::floor(parameter) && std::abs(parameter) < 1e15) {
    std::snprintf(buf, sizeof(buf), "%.0f", parameter);
  } else {
    std::snprintf(buf, sizeof(buf), "%.6g", parameter);
  }
  return buf;
}

void write_prediction_log(std::ostream& out, const Evaluation& ev) {
  out << "test_index,true_label,predicted,scheme,k_or_sigma,rank1_index,rank1_score\n";
  char score[32];
  for (const auto& p : ev.predictions) {
    const auto& row = ev.table[p.row];
    std::snprintf(score, sizeof(score), "%.6f", p.rank1_score);
    out << p.test_index << ',' << int(p.true_label) << ',' << int(p.predicted) << ',' << row.scheme << ','
        << format_parameter(row.parameter) << ',' << p.rank1_index << ',' << score << '\n';
  }
}

}  // namespace cwknn

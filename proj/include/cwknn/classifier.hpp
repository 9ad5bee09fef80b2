#pragma once

#include <array>
#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "cwknn/image.hpp"
#include "cwknn/similarity.hpp"

namespace cwknn {

struct Neighbor {
  std::size_t train_index = 0;
  Label label = 0;
  double score = 0.0;

  friend bool operator==(const Neighbor&, const Neighbor&) = default;
};

enum class DecayKind { Exponential, Gaussian };

/// Majority vote among the k most similar training images.
struct Unweighted {
  std::size_t k = 1;
};
/// Each of the k most similar images votes with its CW-SSIM score.
struct ScoreWeighted {
  std::size_t k = 1;
};
/// Every ranked image votes with decay_weight(rank) * score. Ranks past
/// `truncate_at` are dropped; when unset, the ranking is cut after the last
/// rank whose weight is still >= kDecayMinWeight.
struct Decayed {
  DecayKind kind = DecayKind::Gaussian;
  double sigma = 21.0;
  std::optional<std::size_t> truncate_at;
};

using VoteScheme = std::variant<Unweighted, ScoreWeighted, Decayed>;

inline constexpr double kDecayMinWeight = 1e-6;

void validate(const VoteScheme& scheme);
/// "unweighted", "weighted", "exp" or "gauss".
std::string scheme_name(const VoteScheme& scheme);
/// k for the k-NN schemes, sigma for the decayed ones.
double scheme_parameter(const VoteScheme& scheme);
/// How many top-ranked neighbours the scheme reads.
std::size_t ranks_needed(const VoteScheme& scheme);

/// Exponential: exp(-(i-1)/sigma). Gaussian: exp(-(i-1)^2/sigma).
double decay_weight(std::size_t rank, double sigma, DecayKind kind);
/// Largest rank i >= 1 with decay_weight(i) >= min_weight.
std::size_t decay_cutoff(double sigma, DecayKind kind, double min_weight = kDecayMinWeight);

struct VoteResult {
  Label label = 0;
  std::array<double, 10> tally{};
};

/// `neighbors` must be sorted by descending score. Ties in the tally go to the
/// class with the larger summed raw score, then to the smaller label.
VoteResult vote(std::span<const Neighbor> neighbors, const VoteScheme& scheme);

/// Training images in scoring form, shared read-only by all workers.
class TrainingCorpus {
 public:
  TrainingCorpus(std::vector<ScoringPyramid> pyramids, std::vector<Label> labels);

  static TrainingCorpus build(const LabeledSet& train, const CwSsimConfig& cfg, std::size_t workers = 1);

  std::size_t size() const noexcept { return pyramids_.size(); }
  bool empty() const noexcept { return pyramids_.empty(); }
  const CwSsimConfig& config() const { return pyramids_.front().config(); }
  const ScoringPyramid& pyramid(std::size_t i) const { return pyramids_[i]; }
  std::span<const Label> labels() const noexcept { return labels_; }

 private:
  std::vector<ScoringPyramid> pyramids_;
  std::vector<Label> labels_;
};

/// Orders by descending score, ties by ascending train index. `top` == 0
/// keeps the full ranking.
std::vector<Neighbor> rank_scores(std::span<const double> scores, std::span<const Label> labels,
                                  std::size_t top = 0);

std::vector<Neighbor> rank_neighbors(const ScoringPyramid& test, const TrainingCorpus& corpus,
                                     std::size_t top = 0);

Label classify(const GrayImage& test, const TrainingCorpus& corpus, const VoteScheme& scheme);

struct ErrorRow {
  std::string scheme;
  double parameter = 0.0;
  std::size_t errors = 0;
  std::size_t total = 0;

  double error_rate() const noexcept { return total == 0 ? 0.0 : static_cast<double>(errors) / total; }
};

using ErrorTable = std::vector<ErrorRow>;

struct Prediction {
  std::size_t test_index = 0;
  Label true_label = 0;
  Label predicted = 0;
  std::size_t row = 0;  // index into the ErrorTable / scheme list
  std::size_t rank1_index = 0;
  double rank1_score = 0.0;
};

struct Evaluation {
  ErrorTable table;
  std::vector<Prediction> predictions;  // test-major, scheme-minor
  std::size_t pairs_scored = 0;
  double seconds = 0.0;

  double pairs_per_second() const noexcept { return seconds > 0.0 ? pairs_scored / seconds : 0.0; }
};

/// Ranks every test image once against the corpus and tabulates every scheme
/// from that ranking.
Evaluation evaluate(std::span<const ScoringPyramid> tests, std::span<const Label> test_labels,
                    const TrainingCorpus& corpus, std::span<const VoteScheme> schemes, std::size_t workers = 1);

Evaluation evaluate(const LabeledSet& test, const LabeledSet& train, std::span<const VoteScheme> schemes,
                    const CwSsimConfig& cfg, std::size_t workers = 1);

/// CSV: test_index,true_label,predicted,scheme,k_or_sigma,rank1_index,rank1_score
void write_prediction_log(std::ostream& out, const Evaluation& evaluation);

/// Parameter formatted the way every CSV in this project prints it.
std::string format_parameter(double parameter);

}  // namespace cwknn

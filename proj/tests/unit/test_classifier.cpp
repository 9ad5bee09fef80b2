#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "cwknn/classifier.hpp"
#include "cwknn/error.hpp"
#include "oracle.hpp"
#include "support.hpp"

using namespace cwknn;

namespace {

std::vector<Neighbor> random_ranking(std::size_t n, std::mt19937_64& gen, int labels = 10) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> scores(n);
  std::vector<Label> ls(n);
  for (std::size_t i = 0; i < n; ++i) {
    // Coarse scores so that ties happen.
    scores[i] = std::round(u(gen) * 20) / 20;
    ls[i] = static_cast<Label>(gen() % labels);
  }
  return rank_scores(scores, ls);
}

std::vector<VoteScheme> all_schemes() {
  std::vector<VoteScheme> s;
  for (std::size_t k = 1; k <= 12; ++k) {
    s.emplace_back(Unweighted{k});
    s.emplace_back(ScoreWeighted{k});
  }
  for (double sigma : {0.5, 2.0, 7.0, 21.0}) {
    s.emplace_back(Decayed{DecayKind::Exponential, sigma, std::nullopt});
    s.emplace_back(Decayed{DecayKind::Gaussian, sigma, std::nullopt});
    s.emplace_back(Decayed{DecayKind::Gaussian, sigma, std::size_t{5}});
  }
  return s;
}

}  // namespace

TEST(Decay, WeightExamples) {
  for (double sigma : {0.5, 4.0, 21.0}) {
    EXPECT_EQ(decay_weight(1, sigma, DecayKind::Exponential), 1.0);
    EXPECT_EQ(decay_weight(1, sigma, DecayKind::Gaussian), 1.0);
  }
  EXPECT_NEAR(decay_weight(5, 4.0, DecayKind::Exponential), 0.367879, 1e-6);
  EXPECT_NEAR(decay_weight(8, 21.0, DecayKind::Gaussian), std::exp(-49.0 / 21.0), 1e-15);
  EXPECT_NEAR(decay_weight(8, 21.0, DecayKind::Gaussian), 0.096972, 1e-6);
}

TEST(Decay, CutoffIsLastRankAboveFloor) {
  for (auto kind : {DecayKind::Exponential, DecayKind::Gaussian}) {
    for (double sigma : {1e-9, 0.5, 1.0, 20.0, 21.0, 25.0, 100.0}) {
      const std::size_t r = decay_cutoff(sigma, kind);
      EXPECT_GE(decay_weight(r, sigma, kind), kDecayMinWeight);
      EXPECT_LT(decay_weight(r + 1, sigma, kind), kDecayMinWeight);
    }
  }
  EXPECT_EQ(decay_cutoff(1e-9, DecayKind::Gaussian), 1u);
  EXPECT_EQ(decay_cutoff(21.0, DecayKind::Gaussian), 18u);
}

TEST(Vote, Examples) {
  const std::vector<Neighbor> a{{0, 3, 0.9}, {1, 5, 0.85}, {2, 3, 0.2}};
  EXPECT_EQ(vote(a, Unweighted{3}).label, 3);
  const auto w = vote(a, ScoreWeighted{3});
  EXPECT_EQ(w.label, 3);
  EXPECT_NEAR(w.tally[3], 1.1, 1e-15);
  EXPECT_NEAR(w.tally[5], 0.85, 1e-15);
  const std::vector<Neighbor> tie{{0, 7, 0.8}, {1, 1, 0.9}};
  EXPECT_EQ(vote(tie, Unweighted{2}).label, 1);
  const std::vector<Neighbor> exact{{0, 6, 0.5}, {1, 2, 0.5}};
  EXPECT_EQ(vote(exact, Unweighted{2}).label, 2);
}

TEST(Vote, NeedsEnoughNeighbors) {
  const std::vector<Neighbor> a{{0, 3, 0.9}};
  try {
    vote(a, Unweighted{2});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NotEnoughNeighbors);
  }
  EXPECT_EQ(vote(a, Decayed{}).label, 3);
  EXPECT_THROW(vote(a, Decayed{DecayKind::Gaussian, 0.0, std::nullopt}), Error);
}

TEST(Vote, AgreesWithTallyOracle) {
  std::mt19937_64 gen(12);
  const auto schemes = all_schemes();
  for (int t = 0; t < 200; ++t) {
    const auto ranked = random_ranking(30, gen, t % 2 ? 3 : 10);
    for (const auto& s : schemes) EXPECT_EQ(vote(ranked, s).label, oracle::vote(ranked, s)) << scheme_name(s);
  }
}

TEST(Vote, ArgmaxInvariantUnderScoreScaling) {
  std::mt19937_64 gen(13);
  for (int t = 0; t < 100; ++t) {
    // Powers of two scale exactly, so even exact tally ties survive.
    auto ranked = random_ranking(30, gen);
    for (double factor : {0.25, 8.0}) {
      auto scaled = ranked;
      for (auto& n : scaled) n.score *= factor;
      for (const auto& s : all_schemes()) {
        if (std::holds_alternative<Unweighted>(s)) continue;
        EXPECT_EQ(vote(ranked, s).label, vote(scaled, s).label);
      }
    }
    // Continuous scores have no ties to disturb.
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<double> scores(30);
    std::vector<Label> labels(30);
    for (std::size_t i = 0; i < 30; ++i) {
      scores[i] = u(gen);
      labels[i] = static_cast<Label>(gen() % 10);
    }
    const auto smooth = rank_scores(scores, labels);
    auto scaled = smooth;
    for (auto& n : scaled) n.score *= 0.37;
    for (const auto& s : all_schemes()) {
      if (std::holds_alternative<Unweighted>(s)) continue;
      EXPECT_EQ(vote(smooth, s).label, vote(scaled, s).label);
    }
  }
}

TEST(Vote, RankOneSchemesAgree) {
  std::mt19937_64 gen(14);
  for (int t = 0; t < 100; ++t) {
    const auto ranked = random_ranking(25, gen);
    const Label top = ranked.front().label;
    EXPECT_EQ(vote(ranked, Unweighted{1}).label, top);
    EXPECT_EQ(vote(ranked, ScoreWeighted{1}).label, top);
    EXPECT_EQ(vote(ranked, Decayed{DecayKind::Exponential, 3.0, std::size_t{1}}).label, top);
    EXPECT_EQ(vote(ranked, Decayed{DecayKind::Gaussian, 1e-9, std::size_t{1000}}).label, top);
  }
}

TEST(Ranking, SortingContract) {
  const std::vector<double> scores{0.2, 0.9, 0.5};
  const std::vector<Label> labels{1, 2, 3};
  const auto r = rank_scores(scores, labels);
  ASSERT_EQ(r.size(), 3u);
  EXPECT_EQ(r[0].train_index, 1u);
  EXPECT_EQ(r[1].train_index, 2u);
  EXPECT_EQ(r[2].train_index, 0u);
  const std::vector<double> ties{0.5, 0.7, 0.5, 0.7};
  const std::vector<Label> tl{0, 1, 2, 3};
  const auto t = rank_scores(ties, tl, 3);
  EXPECT_EQ(t, (std::vector<Neighbor>{{1, 1, 0.7}, {3, 3, 0.7}, {0, 0, 0.5}}));
}

TEST(Ranking, MatchesNaiveDoubleLoop) {
  const auto& m = testing_support::mnist_train();
  const CwSsimConfig cfg;
  std::vector<std::size_t> ids(50);
  for (std::size_t i = 0; i < 50; ++i) ids[i] = i;
  const auto train = m.select(ids);
  const auto corpus = TrainingCorpus::build(train, cfg);
  for (std::size_t t = 0; t < 3; ++t) {
    const auto& probe_image = testing_support::mnist_test().images[t];
    const ScoringPyramid probe(decompose(probe_image, cfg.pyramid), cfg);
    const auto ranked = rank_neighbors(probe, corpus);
    const auto q = quantize_to_float(decompose(probe_image, cfg.pyramid));
    std::vector<Neighbor> naive;
    for (std::size_t j = 0; j < 50; ++j) {
      const auto p = quantize_to_float(decompose(train.images[j], cfg.pyramid));
      naive.push_back({j, train.labels[j], oracle::cwssim_index(q, p, cfg)});
    }
    std::stable_sort(naive.begin(), naive.end(), [](const Neighbor& a, const Neighbor& b) { return a.score > b.score; });
    ASSERT_EQ(ranked.size(), naive.size());
    for (std::size_t j = 0; j < 50; ++j) {
      EXPECT_EQ(ranked[j].train_index, naive[j].train_index);
      EXPECT_NEAR(ranked[j].score, naive[j].score, 1e-12);
    }
    EXPECT_EQ(ranked, rank_neighbors(probe, corpus));
  }
}

TEST(Classify, SelfMatchAndSingleClass) {
  const auto& m = testing_support::mnist_train();
  const CwSsimConfig cfg;
  std::vector<std::size_t> ids{0, 1, 2, 3, 4, 5, 6, 7};
  const auto train = m.select(ids);
  const auto corpus = TrainingCorpus::build(train, cfg);
  for (std::size_t i = 0; i < ids.size(); ++i) {
    const ScoringPyramid probe(decompose(train.images[i], cfg.pyramid), cfg);
    const auto top = rank_neighbors(probe, corpus, 1);
    EXPECT_EQ(top[0].train_index, i);
    EXPECT_EQ(top[0].score, 1.0);
    EXPECT_EQ(classify(train.images[i], corpus, Unweighted{1}), train.labels[i]);
  }
  LabeledSet single = train;
  for (auto& l : single.labels) l = 4;
  const auto one_class = TrainingCorpus::build(single, cfg);
  for (const auto& s : all_schemes()) {
    if (ranks_needed(s) > single.size() && !std::holds_alternative<Decayed>(s)) continue;
    EXPECT_EQ(classify(testing_support::mnist_test().images[0], one_class, s), 4);
  }
}

TEST(Evaluate, TestEqualsTrainGivesZeroErrorAtK1) {
  const auto& m = testing_support::mnist_train();
  std::vector<std::size_t> ids(30);
  for (std::size_t i = 0; i < 30; ++i) ids[i] = 100 + i;
  const auto set = m.select(ids);
  const std::vector<VoteScheme> schemes{Unweighted{1}, ScoreWeighted{1}};
  const auto ev = evaluate(set, set, schemes, CwSsimConfig{});
  ASSERT_EQ(ev.table.size(), 2u);
  EXPECT_EQ(ev.table[0].errors, 0u);
  EXPECT_EQ(ev.table[1].errors, 0u);
  EXPECT_EQ(ev.pairs_scored, 900u);
}

TEST(Evaluate, MicroSplitMatchesBruteForcePipeline) {
  const auto& m = testing_support::mnist_train();
  std::vector<std::size_t> train_ids(100), test_ids(20);
  for (std::size_t i = 0; i < 100; ++i) train_ids[i] = i;
  for (std::size_t i = 0; i < 20; ++i) test_ids[i] = 4000 + i;
  const auto train = m.select(train_ids), test = m.select(test_ids);
  const CwSsimConfig cfg;
  std::vector<VoteScheme> schemes;
  for (std::size_t k = 1; k <= 5; ++k) {
    schemes.emplace_back(Unweighted{k});
    schemes.emplace_back(ScoreWeighted{k});
  }
  schemes.emplace_back(Decayed{DecayKind::Gaussian, 21.0, std::nullopt});
  schemes.emplace_back(Decayed{DecayKind::Exponential, 4.0, std::nullopt});
  const auto expected = oracle::knn_predictions(train, test, schemes, cfg);
  for (std::size_t workers : {1, 3}) {
    const auto ev = evaluate(test, train, schemes, cfg, workers);
    ASSERT_EQ(ev.predictions.size(), expected.size());
    for (std::size_t i = 0; i < expected.size(); ++i) {
      EXPECT_EQ(ev.predictions[i].predicted, expected[i]) << "prediction " << i;
    }
    std::size_t k1_errors = 0;
    for (std::size_t t = 0; t < test.size(); ++t) k1_errors += expected[t * schemes.size()] != test.labels[t];
    EXPECT_EQ(ev.table[0].errors, k1_errors);
  }
}

TEST(Evaluate, WorkerCountDoesNotChangeLog) {
  const auto& m = testing_support::mnist_train();
  std::vector<std::size_t> a(40), b(10);
  for (std::size_t i = 0; i < 40; ++i) a[i] = 200 + i;
  for (std::size_t i = 0; i < 10; ++i) b[i] = 300 + i;
  const auto train = m.select(a), test = m.select(b);
  const std::vector<VoteScheme> schemes{Unweighted{3}, Decayed{}};
  std::string logs[2];
  for (int w = 0; w < 2; ++w) {
    std::ostringstream os;
    write_prediction_log(os, evaluate(test, train, schemes, CwSsimConfig{}, w == 0 ? 1 : 4));
    logs[w] = os.str();
  }
  EXPECT_EQ(logs[0], logs[1]);
  EXPECT_NE(logs[0].find("test_index,true_label,predicted,scheme,k_or_sigma,rank1_index,rank1_score\n"),
            std::string::npos);
}

TEST(Evaluate, RejectsTooFewTrainingImages) {
  const auto& m = testing_support::mnist_train();
  std::vector<std::size_t> ids{0, 1};
  const auto set = m.select(ids);
  const std::vector<VoteScheme> schemes{Unweighted{3}};
  EXPECT_THROW(evaluate(set, set, schemes, CwSsimConfig{}), Error);
}

TEST(Format, Parameter) {
  EXPECT_EQ(format_parameter(6.0), "6");
  EXPECT_EQ(format_parameter(20.5), "20.5");
  EXPECT_EQ(format_parameter(0.25), "0.25");
}

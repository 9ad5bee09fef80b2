#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "cwknn/error.hpp"
#include "cwknn/rng.hpp"
#include "cwknn/simgen.hpp"
#include "cwknn/similarity.hpp"
#include "support.hpp"

using namespace cwknn;

namespace {

const std::vector<GrayImage>& templates() {
  static const auto t = load_templates(testing_support::data_dir() / "templates");
  return t;
}

double mean_abs_diff(const GrayImage& a, const GrayImage& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += std::abs(a.pixels()[i] - b.pixels()[i]);
  return s / static_cast<double>(a.size());
}

}  // namespace

TEST(SplitMix64, ReferenceSequence) {
  SplitMix64 rng(0);
  EXPECT_EQ(rng.next(), 0xE220A8397B1DCDAFull);
  EXPECT_EQ(rng.next(), 0x6E789E6AA1B965F4ull);
  EXPECT_EQ(rng.next(), 0x06C45D188009454Full);
  SplitMix64 one(1);
  EXPECT_EQ(one.next(), 0x910A2DEC89025CC1ull);
}

TEST(SplitMix64, UniformAndBelow) {
  SplitMix64 rng(42);
  std::array<int, 7> hist{};
  for (int i = 0; i < 70000; ++i) {
    const double u = rng.uniform01();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    ++hist[rng.below(7)];
  }
  for (int h : hist) EXPECT_NEAR(h, 10000, 500);
  EXPECT_EQ(rng.uniform(2.0, 2.0), 2.0);
}

TEST(Sampling, PartialFisherYates) {
  SplitMix64 a(5), b(5);
  const auto s = sample_without_replacement(100, 30, a);
  EXPECT_EQ(s, sample_without_replacement(100, 30, b));
  EXPECT_EQ(std::set<std::size_t>(s.begin(), s.end()).size(), 30u);
  for (auto v : s) EXPECT_LT(v, 100u);

  // The documented algorithm, written out.
  SplitMix64 c(5);
  std::vector<std::size_t> a_ref(100);
  for (std::size_t i = 0; i < 100; ++i) a_ref[i] = i;
  for (std::size_t i = 0; i < 30; ++i) std::swap(a_ref[i], a_ref[i + c.below(100 - i)]);
  a_ref.resize(30);
  EXPECT_EQ(s, a_ref);

  SplitMix64 d(1);
  auto all = sample_without_replacement(10, 10, d);
  std::sort(all.begin(), all.end());
  for (std::size_t i = 0; i < 10; ++i) EXPECT_EQ(all[i], i);
  EXPECT_THROW(sample_without_replacement(3, 4, d), Error);
}

TEST(Transform, IdentityIsExact) {
  for (const auto& t : templates()) EXPECT_EQ(transform(t, TransformDraw{}), t);
}

TEST(Transform, IntegerShiftWithZeroFill) {
  const auto& t = templates()[7];
  const auto s = transform(t, TransformDraw{2, 0, 1.0, 0.0, 0.0});
  for (std::size_t y = 0; y < 28; ++y) {
    for (std::size_t x = 0; x < 28; ++x) EXPECT_EQ(s.at(x, y), x < 2 ? 0.0 : t.at(x - 2, y));
  }
  const auto up = transform(t, TransformDraw{0, -3, 1.0, 0.0, 0.0});
  for (std::size_t y = 0; y < 28; ++y) {
    for (std::size_t x = 0; x < 28; ++x) EXPECT_EQ(up.at(x, y), y >= 25 ? 0.0 : t.at(x, y + 3));
  }
}

TEST(Transform, RotationRoundTripLoss) {
  for (const auto& t : templates()) {
    const auto there = transform(t, TransformDraw{0, 0, 1.0, 10.0, 0.0});
    const auto back = transform(there, TransformDraw{0, 0, 1.0, -10.0, 0.0});
    EXPECT_LE(mean_abs_diff(back, t), 0.02);
    EXPECT_GT(mean_abs_diff(there, t), 0.02);
  }
}

TEST(Transform, BlurKeepsMassAwayFromBorders) {
  const auto& t = templates()[0];
  const auto b = gaussian_blur(t, 1.0);
  double s0 = 0.0, s1 = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    s0 += t.pixels()[i];
    s1 += b.pixels()[i];
  }
  EXPECT_NEAR(s1, s0, 1e-3 * s0);
  EXPECT_EQ(gaussian_blur(t, 0.0), t);
}

TEST(Generate, ClassBalanceRangeAndDeterminism) {
  TransformParams p;
  p.seed = 17;
  const auto a = generate(templates(), 2000, p);
  const auto b = generate(templates(), 2000, p);
  EXPECT_EQ(a.images, b.images);
  EXPECT_EQ(a.labels, b.labels);
  std::array<int, 10> counts{};
  for (auto l : a.labels) ++counts[l];
  for (int c : counts) EXPECT_EQ(c, 200);
  for (const auto& img : a.images) {
    for (double v : img.pixels()) {
      ASSERT_GE(v, 0.0);
      ASSERT_LE(v, 1.0);
    }
  }
  p.seed = 18;
  EXPECT_NE(generate(templates(), 20, p).images, generate(templates(), 20, TransformParams{}).images);
}

TEST(Generate, IdentityRangesReproduceTemplates) {
  TransformParams p{0.0, 1.0, 1.0, 0.0, 0.0, 0.0, 3};
  const auto set = generate(templates(), 10, p);
  for (int d = 0; d < 10; ++d) {
    EXPECT_EQ(set.images[d], templates()[d]);
    EXPECT_EQ(set.labels[d], d);
  }
}

TEST(Generate, Errors) {
  std::vector<GrayImage> nine(templates().begin(), templates().begin() + 9);
  try {
    generate(nine, 10, {});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::TemplateCountMismatch);
  }
  TransformParams bad;
  bad.scale_min = 1.2;
  EXPECT_THROW(bad.validate(), Error);
}

TEST(Generate, VariantsStayCloserToTheirOwnTemplate) {
  TransformParams p;
  p.seed = 99;
  const auto set = generate(templates(), 500, p);  // 50 draws per template
  const CwSsimConfig cfg;
  std::vector<ScoringPyramid> tp;
  for (const auto& t : templates()) tp.emplace_back(decompose(t, cfg.pyramid), cfg);
  for (int d = 0; d < 10; ++d) {
    std::array<double, 10> mean{};
    for (std::size_t i = d; i < set.size(); i += 10) {
      const ScoringPyramid v(decompose(set.images[i], cfg.pyramid), cfg);
      for (int t = 0; t < 10; ++t) mean[t] += cwssim_score(tp[t], v) / 50;
    }
    for (int t = 0; t < 10; ++t) {
      if (t != d) {
        EXPECT_GT(mean[d], mean[t]) << "template " << d << " vs " << t;
      }
    }
  }
}

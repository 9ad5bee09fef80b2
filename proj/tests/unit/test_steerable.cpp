#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "cwknn/error.hpp"
#include "cwknn/pyramid_io.hpp"
#include "cwknn/steerable.hpp"
#include "oracle.hpp"
#include "support.hpp"

using namespace cwknn;

namespace {

double max_band_difference(const Pyramid& a, const Pyramid& b) {
  double worst = 0.0;
  for (std::size_t i = 0; i < a.subbands.size(); ++i) {
    for (std::size_t j = 0; j < a.subbands[i].coeffs.size(); ++j) {
      worst = std::max(worst, std::abs(a.subbands[i].coeffs[j] - b.subbands[i].coeffs[j]));
    }
  }
  return worst;
}

std::size_t mirror(std::size_t i, std::size_t n) { return (n - i) % n; }

}  // namespace

TEST(FilterBank, SpectralFlatness) {
  const std::vector<std::tuple<std::size_t, std::size_t, PyramidConfig>> cases = {
      {28, 28, {}}, {28, 28, {1, 4, false}}, {32, 24, {3, 6, false}}, {16, 16, {3, 2, false}}, {64, 64, {5, 8, false}}};
  for (const auto& [w, h, cfg] : cases) {
    const FilterBank bank(w, h, cfg);
    double worst = 0.0;
    for (std::size_t v = 0; v < h; ++v) {
      for (std::size_t u = 0; u < w; ++u) {
        const std::size_t i = v * w + u, m = mirror(v, h) * w + mirror(u, w);
        double sum = bank.highpass()[i] * bank.highpass()[i] + bank.lowpass()[i] * bank.lowpass()[i];
        for (std::size_t s = 0; s < cfg.scales; ++s) {
          for (std::size_t o = 0; o < cfg.orientations; ++o) {
            const auto mask = bank.oriented(s, o);
            sum += (mask[i] * mask[i] + mask[m] * mask[m]) / 4.0;
          }
        }
        worst = std::max(worst, std::abs(sum - 1.0));
      }
    }
    EXPECT_LT(worst, 1e-6) << w << "x" << h << " " << cfg.canonical();
  }
}

TEST(FilterBank, OneSidedSupport) {
  const FilterBank bank(28, 28, {});
  for (std::size_t o = 0; o < 8; ++o) {
    const double c = std::cos(std::numbers::pi * o / 8), s = std::sin(std::numbers::pi * o / 8);
    for (std::size_t sc = 0; sc < 2; ++sc) {
      const auto mask = bank.oriented(sc, o);
      for (std::size_t v = 0; v < 28; ++v) {
        for (std::size_t u = 0; u < 28; ++u) {
          const double proj = dft_frequency(u, 28) * c + dft_frequency(v, 28) * s;
          if (proj <= 0.0) {
            EXPECT_EQ(mask[v * 28 + u], 0.0);
          }
          // A frequency and its mirror are never both in the pass band.
          if (mask[v * 28 + u] != 0.0) {
            EXPECT_EQ(mask[mirror(v, 28) * 28 + mirror(u, 28)], 0.0);
          }
        }
      }
    }
  }
}

TEST(FilterBank, TwoOrientationsAreReflections) {
  const FilterBank bank(32, 32, {2, 2, false});
  for (std::size_t s = 0; s < 2; ++s) {
    const auto a = bank.oriented(s, 0), b = bank.oriented(s, 1);
    for (std::size_t v = 0; v < 32; ++v) {
      for (std::size_t u = 0; u < 32; ++u) EXPECT_NEAR(a[v * 32 + u], b[u * 32 + v], 1e-12);
    }
  }
}

TEST(FilterBank, GridLimits) {
  EXPECT_THROW(FilterBank(7, 28, {}), Error);
  try {
    FilterBank(28, 28, {4, 8, false});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ConfigTooDeep);
  }
  EXPECT_NO_THROW(FilterBank(28, 28, {3, 8, false}));
  try {
    FilterBank(30, 30, {3, 4, true});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::InvalidArgument);
  }
}

TEST(Decompose, ConstantImageHasNoBandEnergy) {
  const GrayImage img(28, 28, std::vector<double>(784, 0.6));
  const auto p = decompose(img, {});
  for (const auto& band : p.subbands) {
    for (const auto& c : band.coeffs) EXPECT_LT(std::abs(c), 1e-9);
  }
}

TEST(Decompose, ImpulseGivesFilterImpulseResponse) {
  std::vector<double> px(16 * 16, 0.0);
  px[8 * 16 + 8] = 1.0;
  const GrayImage img(16, 16, px);
  const PyramidConfig cfg{2, 4, false};
  const auto p = decompose(img, cfg);
  const FilterBank bank(16, 16, cfg);
  for (std::size_t s = 0; s < cfg.scales; ++s) {
    for (std::size_t o = 0; o < cfg.orientations; ++o) {
      const auto mask = bank.oriented(s, o);
      std::vector<Complex> m(mask.begin(), mask.end());
      auto response = oracle::dft2(m, 16, 16, +1);
      for (auto& c : response) c /= 256.0;
      const auto& band = p.band(s, o);
      for (std::size_t y = 0; y < 16; ++y) {
        for (std::size_t x = 0; x < 16; ++x) {
          const Complex expected = response[((y + 8) % 16) * 16 + (x + 8) % 16];
          EXPECT_NEAR(std::abs(band.at(x, y) - expected), 0.0, 1e-12);
        }
      }
    }
  }
}

TEST(Decompose, MatchesDenseDftOracle) {
  std::mt19937_64 gen(3);
  for (const PyramidConfig cfg : {PyramidConfig{2, 8, false}, PyramidConfig{2, 3, true}}) {
    const auto img = testing_support::random_image(16, 12, gen);
    const auto fast = decompose(img, cfg);
    const auto slow = oracle::decompose(img, cfg);
    ASSERT_EQ(fast.subbands.size(), slow.subbands.size());
    for (std::size_t i = 0; i < fast.subbands.size(); ++i) {
      EXPECT_EQ(fast.subbands[i].width, slow.subbands[i].width);
      EXPECT_EQ(fast.subbands[i].height, slow.subbands[i].height);
    }
    EXPECT_LT(max_band_difference(fast, slow), 1e-12) << cfg.canonical();
    for (std::size_t i = 0; i < fast.lowpass.size(); ++i) {
      EXPECT_NEAR(fast.lowpass[i], slow.lowpass[i], 1e-12);
      EXPECT_NEAR(fast.highpass[i], slow.highpass[i], 1e-12);
    }
  }
}

TEST(Decompose, DecimatedBandSizes) {
  const auto p = decompose(GrayImage(32, 24), {3, 4, true});
  EXPECT_EQ(p.band(0, 0).width, 32u);
  EXPECT_EQ(p.band(1, 2).width, 16u);
  EXPECT_EQ(p.band(2, 3).width, 8u);
  EXPECT_EQ(p.band(2, 3).height, 6u);
}

TEST(Decompose, ShiftCovariance) {
  std::mt19937_64 gen(11);
  const auto& mnist = testing_support::mnist_train();
  for (int trial = 0; trial < 50; ++trial) {
    const auto& img = mnist.images[trial];
    const long dx = static_cast<long>(gen() % 28) - 14, dy = static_cast<long>(gen() % 28) - 14;
    const auto base = decompose(img, {});
    const auto shifted = decompose(circshift(img, dx, dy), {});
    double worst = 0.0;
    for (std::size_t b = 0; b < base.subbands.size(); ++b) {
      for (std::size_t y = 0; y < 28; ++y) {
        for (std::size_t x = 0; x < 28; ++x) {
          const std::size_t sx = static_cast<std::size_t>((static_cast<long>(x) + dx + 28) % 28);
          const std::size_t sy = static_cast<std::size_t>((static_cast<long>(y) + dy + 28) % 28);
          worst = std::max(worst, std::abs(shifted.subbands[b].at(sx, sy) - base.subbands[b].at(x, y)));
        }
      }
    }
    EXPECT_LT(worst, 1e-9) << "shift " << dx << "," << dy;
  }
}

TEST(Decompose, Linearity) {
  std::mt19937_64 gen(5);
  const auto x = testing_support::random_image(28, 28, gen);
  const auto y = testing_support::random_image(28, 28, gen);
  const double a = 0.3, b = 0.6;
  std::vector<double> mix(784);
  for (std::size_t i = 0; i < 784; ++i) mix[i] = a * x.pixels()[i] + b * y.pixels()[i];
  const auto pm = decompose(GrayImage(28, 28, mix), {});
  const auto px = decompose(x, {}), py = decompose(y, {});
  double worst = 0.0;
  for (std::size_t i = 0; i < pm.subbands.size(); ++i) {
    for (std::size_t j = 0; j < 784; ++j) {
      const Complex expected = a * px.subbands[i].coeffs[j] + b * py.subbands[i].coeffs[j];
      worst = std::max(worst, std::abs(pm.subbands[i].coeffs[j] - expected));
    }
  }
  EXPECT_LT(worst, 1e-9);
}

TEST(Decompose, SharedBankIsReused) {
  EXPECT_EQ(shared_filter_bank(28, 28, {}).get(), shared_filter_bank(28, 28, {}).get());
  EXPECT_NE(shared_filter_bank(28, 28, {}).get(), shared_filter_bank(28, 28, {1, 8, false}).get());
}

TEST(PyramidIo, RoundTripAtFloatPrecision) {
  std::mt19937_64 gen(9);
  for (const PyramidConfig cfg : {PyramidConfig{}, PyramidConfig{3, 4, true}, PyramidConfig{1, 2, false}}) {
    const auto p = decompose(testing_support::random_image(16, 16, gen), cfg);
    const auto back = deserialize_pyramid(serialize_pyramid(p));
    EXPECT_EQ(back.config, cfg);
    EXPECT_LT(max_band_difference(p, back), 1e-6);
    const auto q = quantize_to_float(p);
    EXPECT_EQ(max_band_difference(q, back), 0.0);
    EXPECT_EQ(serialize_pyramid(back), serialize_pyramid(p));
    EXPECT_EQ(serialize_pyramid(back).size(), serialized_pyramid_size(16, 16, cfg));
  }
}

TEST(PyramidIo, Errors) {
  auto code = [](auto&& fn) {
    try {
      fn();
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::InvalidArgument;
  };
  EXPECT_EQ(code([] { deserialize_pyramid(Bytes{}); }), ErrorCode::WrongMagic);
  const PyramidConfig cfg{2, 3, false};
  const auto bytes = serialize_pyramid(decompose(GrayImage(12, 12), cfg));
  const std::size_t band_bytes = 12 * 12 * 8;
  const Bytes short_one(bytes.begin(), bytes.end() - static_cast<std::ptrdiff_t>(band_bytes));
  EXPECT_EQ(code([&] { deserialize_pyramid(short_one); }), ErrorCode::Truncated);
  EXPECT_EQ(code([&] { deserialize_pyramid(bytes, PyramidConfig{2, 4, false}); }), ErrorCode::ConfigMismatch);
}

#include <gtest/gtest.h>

#include <random>

#include "cwknn/error.hpp"
#include "cwknn/idx.hpp"
#include "cwknn/io.hpp"
#include "cwknn/pgm.hpp"
#include "support.hpp"

using namespace cwknn;

namespace {

Bytes be32(std::initializer_list<std::uint32_t> words) {
  Bytes out;
  for (auto w : words) {
    for (int s = 24; s >= 0; s -= 8) out.push_back(static_cast<std::uint8_t>(w >> s));
  }
  return out;
}

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no cwknn::Error thrown";
  return ErrorCode::InvalidArgument;
}

}  // namespace

TEST(GrayImage, RejectsOutOfRangeAndWrongLength) {
  EXPECT_EQ(code_of([] { GrayImage(2, 2, {0.0, 0.5, 1.0}); }), ErrorCode::InvalidArgument);
  EXPECT_EQ(code_of([] { GrayImage(1, 2, {0.0, 1.5}); }), ErrorCode::InvalidArgument);
  EXPECT_EQ(code_of([] { GrayImage(1, 1, {-0.1}); }), ErrorCode::InvalidArgument);
}

TEST(GrayImage, BytesAreScaledBy255AndMonotone) {
  Bytes all(256);
  for (int i = 0; i < 256; ++i) all[i] = static_cast<std::uint8_t>(i);
  const auto img = GrayImage::from_bytes(16, 16, all);
  for (int i = 1; i < 256; ++i) EXPECT_LT(img.pixels()[i - 1], img.pixels()[i]);
  EXPECT_EQ(img.pixels()[255], 1.0);
  EXPECT_EQ(img.to_bytes(), all);
}

TEST(GrayImage, CircshiftWrapsAround) {
  const auto img = GrayImage::from_bytes(3, 2, Bytes{1, 2, 3, 4, 5, 6});
  const auto s = circshift(img, 1, 1);
  EXPECT_EQ(s.to_bytes(), (Bytes{6, 4, 5, 3, 1, 2}));
  EXPECT_EQ(circshift(s, -1, -1), img);
}

TEST(Idx, SingleOneByOneImage) {
  Bytes b = be32({0x803, 1, 1, 1});
  b.push_back(0xFF);
  const auto imgs = parse_idx_images(b);
  ASSERT_EQ(imgs.size(), 1u);
  EXPECT_EQ(imgs[0].width(), 1u);
  EXPECT_EQ(imgs[0].at(0, 0), 1.0);
}

TEST(Idx, LabelExamples) {
  EXPECT_TRUE(parse_idx_labels(be32({0x801, 0})).empty());
  Bytes b = be32({0x801, 2});
  b.push_back(3);
  b.push_back(7);
  EXPECT_EQ(parse_idx_labels(b), (std::vector<Label>{3, 7}));
}

TEST(Idx, ThreeImageRoundTripIsByteExact) {
  Bytes b = be32({0x803, 3, 4, 5});
  for (int i = 0; i < 3 * 20; ++i) b.push_back(static_cast<std::uint8_t>(i * 37 + 11));
  EXPECT_EQ(write_idx_images(parse_idx_images(b)), b);
}

TEST(Idx, RandomLabeledSetsRoundTrip) {
  std::mt19937_64 gen(7);
  testing_support::TempDir dir("idx");
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = gen() % 6 + 1, w = gen() % 5 + 1, h = gen() % 5 + 1;
    LabeledSet s;
    for (std::size_t i = 0; i < n; ++i) {
      Bytes px(w * h);
      for (auto& p : px) p = static_cast<std::uint8_t>(gen());
      s.images.push_back(GrayImage::from_bytes(w, h, px));
      s.labels.push_back(static_cast<Label>(gen() % 10));
    }
    save_labeled_set(s, dir / "i", dir / "l");
    const auto back = load_labeled_set(dir / "i", dir / "l");
    EXPECT_EQ(back.images, s.images);
    EXPECT_EQ(back.labels, s.labels);
  }
}

TEST(Idx, GzipIsDecompressedTransparently) {
  Bytes b = be32({0x801, 3});
  b.insert(b.end(), {1, 2, 9});
  const Bytes z = gzip(b);
  ASSERT_TRUE(is_gzip(z));
  EXPECT_EQ(parse_idx_labels(z), (std::vector<Label>{1, 2, 9}));
}

TEST(Idx, Errors) {
  EXPECT_EQ(code_of([] { parse_idx_images(be32({0x801, 1, 1, 1})); }), ErrorCode::WrongMagic);
  EXPECT_EQ(code_of([] { parse_idx_labels(be32({0x803, 1})); }), ErrorCode::WrongMagic);
  EXPECT_EQ(code_of([] { parse_idx_images(be32({0x803, 2, 2, 2})); }), ErrorCode::Truncated);
  EXPECT_EQ(code_of([] { parse_idx_images(Bytes{0, 0, 8}); }), ErrorCode::WrongMagic);
  EXPECT_EQ(code_of([] { parse_idx_images(be32({0x803, 1})); }), ErrorCode::Truncated);
  EXPECT_EQ(code_of([] { parse_idx_images(be32({0x803, 1, 0, 3})); }), ErrorCode::ZeroDim);
  Bytes bad = be32({0x801, 1});
  bad.push_back(10);
  EXPECT_EQ(code_of([&] { parse_idx_labels(bad); }), ErrorCode::BadLabel);
}

TEST(Idx, IgnoresTrailingBytesBeyondPayload) {
  Bytes b = be32({0x801, 1});
  b.insert(b.end(), {4, 200, 200});
  EXPECT_EQ(parse_idx_labels(b), (std::vector<Label>{4}));
}

TEST(Idx, MnistShape) {
  const auto& train = testing_support::mnist_train();
  const auto& test = testing_support::mnist_test();
  EXPECT_EQ(train.size(), 60000u);
  EXPECT_EQ(test.size(), 10000u);
  EXPECT_EQ(train.images.front().width(), 28u);
  EXPECT_EQ(train.images.front().height(), 28u);
}

TEST(Pgm, TwoByTwoScaling) {
  const std::string text = "P5\n2 2\n255\n";
  Bytes b(text.begin(), text.end());
  b.insert(b.end(), {0, 255, 128, 64});
  const auto img = read_pgm(b);
  EXPECT_EQ(img.at(0, 0), 0.0);
  EXPECT_EQ(img.at(1, 0), 1.0);
  EXPECT_EQ(img.at(0, 1), 128.0 / 255.0);
  EXPECT_EQ(img.at(1, 1), 64.0 / 255.0);
  EXPECT_EQ(write_pgm(img), b);
}

TEST(Pgm, CommentsAreSkipped) {
  const std::string text = "P5\n# made by hand\n1 1\n# max\n255\n";
  Bytes b(text.begin(), text.end());
  b.push_back(51);
  EXPECT_EQ(read_pgm(b).at(0, 0), 0.2);
}

TEST(Pgm, Errors) {
  const std::string wide = "P5\n1 1\n65535\n";
  Bytes b(wide.begin(), wide.end());
  b.insert(b.end(), {0, 0});
  EXPECT_EQ(code_of([&] { read_pgm(b); }), ErrorCode::MalformedHeader);
  const std::string ascii = "P2\n1 1\n255\n0\n";
  EXPECT_EQ(code_of([&] { read_pgm(Bytes(ascii.begin(), ascii.end())); }), ErrorCode::MalformedHeader);
  const std::string shortdata = "P5\n2 2\n255\n";
  Bytes s(shortdata.begin(), shortdata.end());
  s.push_back(1);
  EXPECT_EQ(code_of([&] { read_pgm(s); }), ErrorCode::Truncated);
}

TEST(Pgm, ShippedTemplatesRoundTrip) {
  for (int d = 0; d < 10; ++d) {
    const auto bytes = read_file(testing_support::data_dir() / "templates" / (std::to_string(d) + ".pgm"));
    EXPECT_EQ(write_pgm(read_pgm(bytes)), bytes) << d;
  }
}

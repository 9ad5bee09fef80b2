#include "cwknn/pgm.hpp"

#include <cctype>
#include <string>

#include "cwknn/error.hpp"
#include "cwknn/io.hpp"

namespace cwknn {
namespace {

class HeaderReader {
 public:
  explicit HeaderReader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

  void skip_space_and_comments() {
    while (pos_ < bytes_.size()) {
      if (std::isspace(bytes_[pos_])) {
        ++pos_;
      } else if (bytes_[pos_] == '#') {
        while (pos_ < bytes_.size() && bytes_[pos_] != '\n') ++pos_;
      } else {
        break;
      }
    }
  }

  unsigned long number(const char* what) {
    skip_space_and_comments();
    if (pos_ >= bytes_.size()) throw Error(ErrorCode::Truncated, std::string("PGM header ends before ") + what);
    if (!std::isdigit(bytes_[pos_])) throw Error(ErrorCode::MalformedHeader, std::string("PGM ") + what + " is not a number");
    unsigned long v = 0;
    while (pos_ < bytes_.size() && std::isdigit(bytes_[pos_])) {
      v = v * 10 + (bytes_[pos_++] - '0');
      if (v > 1'000'000) throw Error(ErrorCode::MalformedHeader, std::string("PGM ") + what + " too large");
    }
    return v;
  }

  std::size_t pos() const { return pos_; }
  void advance(std::size_t n) { pos_ += n; }

 private:
  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 0;
};

}  // namespace

GrayImage read_pgm(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 2) throw Error(ErrorCode::Truncated, "PGM shorter than its magic");
  if (bytes[0] != 'P' || bytes[1] != '5') throw Error(ErrorCode::MalformedHeader, "not a binary P5 PGM");
  HeaderReader reader(bytes);
  reader.advance(2);
  const auto width = reader.number("width");
  const auto height = reader.number("height");
  const auto maxval = reader.number("maxval");
  if (width == 0 || height == 0) throw Error(ErrorCode::MalformedHeader, "PGM with a zero dimension");
  if (maxval != 255) throw Error(ErrorCode::MalformedHeader, "maxval " + std::to_string(maxval) + " unsupported");
  // Exactly one whitespace byte separates maxval from the raster.
  if (reader.pos() >= bytes.size()) throw Error(ErrorCode::Truncated, "PGM header without raster");
  if (!std::isspace(bytes[reader.pos()])) throw Error(ErrorCode::MalformedHeader, "missing separator after maxval");
  reader.advance(1);
  const std::size_t n = width * height;
  if (bytes.size() - reader.pos() < n) throw Error(ErrorCode::Truncated, "PGM raster cut short");
  return GrayImage::from_bytes(width, height, bytes.subspan(reader.pos(), n));
}

Bytes write_pgm(const GrayImage& image) {
  const std::string header = "P5\n" + std::to_string(image.width()) + " " + std::to_string(image.height()) + "\n255\n";
  Bytes out(header.begin(), header.end());
  const Bytes raster = image.to_bytes();
  out.insert(out.end(), raster.begin(), raster.end());
  return out;
}

GrayImage load_pgm(const std::filesystem::path& path) { return read_pgm(read_file(path)); }

void save_pgm(const GrayImage& image, const std::filesystem::path& path) { write_file(path, write_pgm(image)); }

}  // namespace cwknn

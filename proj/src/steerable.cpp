#include "cwknn/steerable.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <shared_mutex>
#include <tuple>

#include "cwknn/error.hpp"

namespace cwknn {
namespace {

constexpr double kPi = std::numbers::pi;

// FFTW's planner is not thread-safe; execution with the new-array API is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

// One-octave raised-cosine transition ending at log2 radius `edge`:
// 0 below edge-1, 1 above edge. high^2 + low^2 == 1.
double high_transition(double log_radius, double edge) {
  if (log_radius >= edge) return 1.0;
  if (log_radius <= edge - 1.0) return 0.0;
  return std::cos(kPi / 2.0 * (edge - log_radius));
}

double low_transition(double log_radius, double edge) {
  if (log_radius >= edge) return 0.0;
  if (log_radius <= edge - 1.0) return 1.0;
  return std::sin(kPi / 2.0 * (edge - log_radius));
}

// alpha with sum_o alpha^2 cos^(2(O-1))(theta - pi o / O) == 1.
double angular_gain(std::size_t orientations) {
  const double n = static_cast<double>(orientations) - 1.0;
  return std::exp((orientations - 1) * std::log(2.0) + std::lgamma(n + 1.0) -
                  0.5 * (std::log(static_cast<double>(orientations)) + std::lgamma(2.0 * n + 1.0)));
}

fftw_complex* as_fftw(Complex* p) { return reinterpret_cast<fftw_complex*>(p); }

}  // namespace

void PyramidConfig::validate() const {
  if (scales < 1) throw Error(ErrorCode::InvalidArgument, "pyramid needs at least one scale");
  if (orientations < 2) throw Error(ErrorCode::InvalidArgument, "pyramid needs at least two orientations");
  if (scales > 16 || orientations > 32) throw Error(ErrorCode::InvalidArgument, "pyramid config out of range");
}

std::string PyramidConfig::canonical() const {
  return "scales=" + std::to_string(scales) + ";orientations=" + std::to_string(orientations) +
         ";decimated=" + (decimated ? "1" : "0");
}

std::size_t subband_extent(std::size_t image_extent, std::size_t scale, bool decimated) noexcept {
  return decimated ? image_extent >> scale : image_extent;
}

double dft_frequency(std::size_t index, std::size_t n) noexcept {
  const double k = index <= n / 2 ? static_cast<double>(index)
                                  : static_cast<double>(index) - static_cast<double>(n);
  return 2.0 * kPi * k / static_cast<double>(n);
}

struct FilterBank::Plans {
  fftw_plan forward = nullptr;
  fftw_plan inverse = nullptr;

  ~Plans() {
    std::lock_guard lock(planner_mutex());
    if (forward) fftw_destroy_plan(forward);
    if (inverse) fftw_destroy_plan(inverse);
  }
};

FilterBank::FilterBank(std::size_t width, std::size_t height, const PyramidConfig& config)
    : width_(width), height_(height), config_(config), plans_(std::make_unique<Plans>()) {
  config_.validate();
  if (width < 8 || height < 8) {
    throw Error(ErrorCode::InvalidArgument, "filter bank needs at least an 8x8 grid");
  }
  const std::size_t min_side = std::min(width, height);
  // Coarsest band centre pi/2^S must not drop below the fundamental 2pi/min_side.
  if (min_side < (std::size_t{1} << (config_.scales + 1))) {
    throw Error(ErrorCode::ConfigTooDeep, std::to_string(config_.scales) + " scales do not fit a " +
                                              std::to_string(width) + "x" + std::to_string(height) + " grid");
  }
  if (config_.decimated) {
    const std::size_t factor = std::size_t{1} << (config_.scales - 1);
    if (width % factor != 0 || height % factor != 0) {
      throw Error(ErrorCode::InvalidArgument, "decimated pyramid needs dimensions divisible by " +
                                                  std::to_string(factor));
    }
  }

  const std::size_t n = width * height;
  const std::size_t S = config_.scales;
  const std::size_t O = config_.orientations;
  const double gain = 2.0 * angular_gain(O);

  oriented_.assign(S * O, std::vector<double>(n, 0.0));
  highpass_.assign(n, 0.0);
  lowpass_.assign(n, 0.0);

  std::vector<double> cos_o(O), sin_o(O);
  for (std::size_t o = 0; o < O; ++o) {
    cos_o[o] = std::cos(kPi * o / O);
    sin_o[o] = std::sin(kPi * o / O);
  }

  for (std::size_t v = 0; v < height; ++v) {
    const double wy = dft_frequency(v, height);
    for (std::size_t u = 0; u < width; ++u) {
      const double wx = dft_frequency(u, width);
      const std::size_t idx = v * width + u;
      const double r = std::hypot(wx, wy);
      if (r == 0.0) {
        lowpass_[idx] = 1.0;
        continue;
      }
      const double lr = std::log2(r / kPi);
      highpass_[idx] = high_transition(lr, 0.0);

      double low_product = low_transition(lr, 0.0);
      for (std::size_t s = 0; s < S; ++s) {
        const double edge = -static_cast<double>(s + 1);
        const double radial = low_product * high_transition(lr, edge);
        low_product *= low_transition(lr, edge);
        if (radial == 0.0) continue;
        for (std::size_t o = 0; o < O; ++o) {
          const double c = (wx * cos_o[o] + wy * sin_o[o]) / r;
          if (c <= 0.0) continue;
          oriented_[s * O + o][idx] = radial * gain * std::pow(c, static_cast<double>(O - 1));
        }
      }
      lowpass_[idx] = low_product;
    }
  }

  std::vector<Complex> buf(n);
  std::lock_guard lock(planner_mutex());
  const int h = static_cast<int>(height);
  const int w = static_cast<int>(width);
  plans_->forward = fftw_plan_dft_2d(h, w, as_fftw(buf.data()), as_fftw(buf.data()), FFTW_FORWARD,
                                     FFTW_ESTIMATE | FFTW_UNALIGNED);
  plans_->inverse = fftw_plan_dft_2d(h, w, as_fftw(buf.data()), as_fftw(buf.data()), FFTW_BACKWARD,
                                     FFTW_ESTIMATE | FFTW_UNALIGNED);
  if (!plans_->forward || !plans_->inverse) throw Error(ErrorCode::InvalidArgument, "FFTW planning failed");
}

FilterBank::~FilterBank() = default;

std::span<const double> FilterBank::oriented(std::size_t scale, std::size_t orientation) const {
  return oriented_.at(scale * config_.orientations + orientation);
}

Pyramid FilterBank::decompose(const GrayImage& image) const {
  if (image.width() != width_ || image.height() != height_) {
    throw Error(ErrorCode::DimensionMismatch, "image does not match the filter bank grid");
  }
  const std::size_t n = width_ * height_;
  const double norm = 1.0 / static_cast<double>(n);

  std::vector<Complex> spectrum(image.pixels().begin(), image.pixels().end());
  fftw_execute_dft(plans_->forward, as_fftw(spectrum.data()), as_fftw(spectrum.data()));

  std::vector<Complex> work(n);
  auto filter = [&](std::span<const double> mask) {
    for (std::size_t i = 0; i < n; ++i) work[i] = spectrum[i] * mask[i];
    fftw_execute_dft(plans_->inverse, as_fftw(work.data()), as_fftw(work.data()));
    for (auto& c : work) c *= norm;
  };

  Pyramid p;
  p.config = config_;
  p.width = width_;
  p.height = height_;
  p.subbands.reserve(config_.scales * config_.orientations);
  for (std::size_t s = 0; s < config_.scales; ++s) {
    const std::size_t step = config_.decimated ? std::size_t{1} << s : 1;
    for (std::size_t o = 0; o < config_.orientations; ++o) {
      filter(oriented(s, o));
      Subband band;
      band.scale = s;
      band.orientation = o;
      band.width = subband_extent(width_, s, config_.decimated);
      band.height = subband_extent(height_, s, config_.decimated);
      band.coeffs.resize(band.width * band.height);
      for (std::size_t y = 0; y < band.height; ++y) {
        for (std::size_t x = 0; x < band.width; ++x) {
          band.coeffs[y * band.width + x] = work[(y * step) * width_ + x * step];
        }
      }
      p.subbands.push_back(std::move(band));
    }
  }
  filter(highpass_);
  p.highpass.resize(n);
  for (std::size_t i = 0; i < n; ++i) p.highpass[i] = work[i].real();
  filter(lowpass_);
  p.lowpass.resize(n);
  for (std::size_t i = 0; i < n; ++i) p.lowpass[i] = work[i].real();
  return p;
}

std::shared_ptr<const FilterBank> build_filter_bank(std::size_t width, std::size_t height,
                                                    const PyramidConfig& config) {
  return std::make_shared<const FilterBank>(width, height, config);
}

std::shared_ptr<const FilterBank> shared_filter_bank(std::size_t width, std::size_t height,
                                                     const PyramidConfig& config) {
  using Key = std::tuple<std::size_t, std::size_t, std::size_t, std::size_t, bool>;
  static std::shared_mutex mutex;
  static std::map<Key, std::shared_ptr<const FilterBank>> registry;

  const Key key{width, height, config.scales, config.orientations, config.decimated};
  {
    std::shared_lock lock(mutex);
    if (auto it = registry.find(key); it != registry.end()) return it->second;
  }
  auto bank = build_filter_bank(width, height, config);
  std::unique_lock lock(mutex);
  return registry.try_emplace(key, std::move(bank)).first->second;
}

Pyramid decompose(const GrayImage& image, const PyramidConfig& config) {
  return shared_filter_bank(image.width(), image.height(), config)->decompose(image);
}

Pyramid quantize_to_float(const Pyramid& pyramid) {
  Pyramid out = pyramid;
  for (auto& band : out.subbands) {
    for (auto& c : band.coeffs) {
      c = Complex(static_cast<float>(c.real()), static_cast<float>(c.imag()));
    }
  }
  return out;
}

}  // namespace cwknn

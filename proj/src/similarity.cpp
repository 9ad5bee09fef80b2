#include "cwknn/similarity.hpp"

#include <cmath>
#include <cstdio>
#include <string>

#include "cwknn/error.hpp"
#include "cwssim_kernel.hpp"

namespace cwknn {
namespace {

void check_window_fits(const Pyramid& p, const CwSsimConfig& cfg) {
  for (const auto& band : p.subbands) {
    if (cfg.window > band.width || cfg.window > band.height) {
      throw Error(ErrorCode::WindowTooLarge, "window " + std::to_string(cfg.window) + " exceeds a " +
                                                 std::to_string(band.width) + "x" + std::to_string(band.height) +
                                                 " subband");
    }
  }
}

void check_compatible(const Pyramid& a, const Pyramid& b, const CwSsimConfig& cfg) {
  if (!(a.config == b.config) || a.width != b.width || a.height != b.height) {
    throw Error(ErrorCode::ConfigMismatch, "pyramids differ in config or dimensions");
  }
  if (!(a.config == cfg.pyramid)) {
    throw Error(ErrorCode::ConfigMismatch, "pyramid built with " + a.config.canonical() + ", scoring expects " +
                                               cfg.pyramid.canonical());
  }
  if (a.subbands.size() != a.config.scales * a.config.orientations ||
      b.subbands.size() != a.subbands.size()) {
    throw Error(ErrorCode::ConfigMismatch, "pyramid is missing subbands");
  }
  check_window_fits(a, cfg);
}

void split_planes(const Subband& band, std::vector<double>& re, std::vector<double>& im) {
  re.resize(band.coeffs.size());
  im.resize(band.coeffs.size());
  for (std::size_t i = 0; i < band.coeffs.size(); ++i) {
    re[i] = band.coeffs[i].real();
    im[i] = band.coeffs[i].imag();
  }
}

}  // namespace

PatchStats patch_stats(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw Error(ErrorCode::LengthMismatch, "patches differ in length");
  if (x.size() < 2) throw Error(ErrorCode::EmptyPatch, "a patch needs at least two samples");
  const double m = static_cast<double>(x.size());
  PatchStats st;
  for (std::size_t i = 0; i < x.size(); ++i) {
    st.mu_x += x[i];
    st.mu_y += y[i];
  }
  st.mu_x /= m;
  st.mu_y /= m;
  double vx = 0.0, vy = 0.0, cxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - st.mu_x;
    const double dy = y[i] - st.mu_y;
    vx += dx * dx;
    vy += dy * dy;
    cxy += dx * dy;
  }
  st.sigma_x = std::sqrt(vx / m);
  st.sigma_y = std::sqrt(vy / m);
  st.sigma_xy = cxy / m;
  return st;
}

double ssim_patch(std::span<const double> x, std::span<const double> y, const SsimConstants& c) {
  if (x.size() != y.size()) throw Error(ErrorCode::LengthMismatch, "patches differ in length");
  if (x.size() < 2) throw Error(ErrorCode::EmptyPatch, "a patch needs at least two samples");
  const double m = static_cast<double>(x.size());
  double sx = 0.0, sy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
  }
  const double mx = sx / m;
  const double my = sy / m;
  double vx = 0.0, vy = 0.0, cxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mx;
    const double dy = y[i] - my;
    vx += dx * dx;
    vy += dy * dy;
    cxy += dx * dy;
  }
  vx /= m;
  vy /= m;
  cxy /= m;
  return ((2.0 * mx * my + c.c1) * (2.0 * cxy + c.c2)) / ((mx * mx + my * my + c.c1) * (vx + vy + c.c2));
}

double mean_ssim(const GrayImage& a, const GrayImage& b, std::size_t window, std::size_t stride,
                 const SsimConstants& c) {
  if (a.width() != b.width() || a.height() != b.height()) {
    throw Error(ErrorCode::DimensionMismatch, "images differ in size");
  }
  if (stride < 1) throw Error(ErrorCode::InvalidArgument, "stride must be at least 1");
  if (window < 2 || window > a.width() || window > a.height()) {
    throw Error(ErrorCode::WindowTooLarge, "window " + std::to_string(window) + " does not fit the image");
  }
  const std::size_t nx = detail::window_positions(a.width(), window, stride);
  const std::size_t ny = detail::window_positions(a.height(), window, stride);
  std::vector<double> px(window * window), py(window * window);
  double total = 0.0;
  for (std::size_t j = 0; j < ny; ++j) {
    for (std::size_t i = 0; i < nx; ++i) {
      std::size_t n = 0;
      for (std::size_t dy = 0; dy < window; ++dy) {
        for (std::size_t dx = 0; dx < window; ++dx, ++n) {
          px[n] = a.at(i * stride + dx, j * stride + dy);
          py[n] = b.at(i * stride + dx, j * stride + dy);
        }
      }
      total += ssim_patch(px, py, c);
    }
  }
  return total / static_cast<double>(nx * ny);
}

void CwSsimConfig::validate() const {
  pyramid.validate();
  if (window < 1 || window % 2 == 0) throw Error(ErrorCode::InvalidArgument, "window side must be odd");
  if (stride < 1) throw Error(ErrorCode::InvalidArgument, "stride must be at least 1");
  if (!(k >= 0.0) || !std::isfinite(k)) throw Error(ErrorCode::InvalidArgument, "K must be finite and >= 0");
}

std::string CwSsimConfig::canonical() const {
  char kbuf[32];
  std::snprintf(kbuf, sizeof(kbuf), "%.17g", k);
  return pyramid.canonical() + ";window=" + std::to_string(window) + ";stride=" + std::to_string(stride) +
         ";k=" + kbuf;
}

double cwssim_window(std::span<const Complex> cx, std::span<const Complex> cy, double k) {
  if (cx.size() != cy.size()) throw Error(ErrorCode::LengthMismatch, "coefficient windows differ in length");
  if (cx.empty()) throw Error(ErrorCode::EmptyPatch, "empty coefficient window");
  if (!(k >= 0.0)) throw Error(ErrorCode::InvalidArgument, "K must be >= 0");
  Complex cross = 0.0;
  double ex = 0.0, ey = 0.0;
  for (std::size_t i = 0; i < cx.size(); ++i) {
    cross += cx[i] * std::conj(cy[i]);
    ex += std::norm(cx[i]);
    ey += std::norm(cy[i]);
  }
  const double den = ex + ey + k;
  if (den == 0.0) throw Error(ErrorCode::DegenerateZero, "both windows are zero and K == 0");
  return std::min((2.0 * std::abs(cross) + k) / den, 1.0);
}

std::vector<std::vector<double>> cwssim_window_scores(const Pyramid& a, const Pyramid& b,
                                                      const CwSsimConfig& cfg) {
  cfg.validate();
  check_compatible(a, b, cfg);
  detail::Scratch s;
  std::vector<double> are, aim, bre, bim, ea, eb;
  std::vector<std::vector<double>> out;
  out.reserve(a.subbands.size());
  for (std::size_t i = 0; i < a.subbands.size(); ++i) {
    const Subband& ba = a.subbands[i];
    const Subband& bb = b.subbands[i];
    split_planes(ba, are, aim);
    split_planes(bb, bre, bim);
    const std::size_t count = detail::window_positions(ba.width, cfg.window, cfg.stride) *
                              detail::window_positions(ba.height, cfg.window, cfg.stride);
    ea.resize(count);
    eb.resize(count);
    detail::band_energies(are.data(), aim.data(), ba.width, ba.height, cfg.window, cfg.stride, ea.data(), s);
    detail::band_energies(bre.data(), bim.data(), bb.width, bb.height, cfg.window, cfg.stride, eb.data(), s);
    const double sum = detail::band_scores(are.data(), aim.data(), bre.data(), bim.data(), ea.data(), eb.data(),
                                           ba.width, ba.height, cfg.window, cfg.stride, cfg.k, s);
    if (std::isnan(sum)) throw Error(ErrorCode::DegenerateZero, "zero-energy window with K == 0");
    out.emplace_back(s.scores.begin(), s.scores.begin() + static_cast<std::ptrdiff_t>(count));
  }
  return out;
}

double cwssim_index(const Pyramid& a, const Pyramid& b, const CwSsimConfig& cfg) {
  double total = 0.0;
  std::size_t count = 0;
  for (const auto& band : cwssim_window_scores(a, b, cfg)) {
    double band_total = 0.0;
    for (double v : band) band_total += v;
    total += band_total;
    count += band.size();
  }
  return total / static_cast<double>(count);
}

double cwssim_images(const GrayImage& a, const GrayImage& b, const CwSsimConfig& cfg) {
  if (a.width() != b.width() || a.height() != b.height()) {
    throw Error(ErrorCode::DimensionMismatch, "images differ in size");
  }
  return cwssim_index(decompose(a, cfg.pyramid), decompose(b, cfg.pyramid), cfg);
}

ScoringPyramid::ScoringPyramid(const Pyramid& pyramid, const CwSsimConfig& cfg)
    : width_(pyramid.width), height_(pyramid.height), cfg_(cfg) {
  cfg.validate();
  if (!(pyramid.config == cfg.pyramid)) {
    throw Error(ErrorCode::ConfigMismatch, "pyramid built with " + pyramid.config.canonical() +
                                               ", scoring expects " + cfg.pyramid.canonical());
  }
  check_window_fits(pyramid, cfg);

  std::size_t coeff_total = 0, energy_total = 0;
  for (const auto& band : pyramid.subbands) {
    const std::size_t count = detail::window_positions(band.width, cfg.window, cfg.stride) *
                              detail::window_positions(band.height, cfg.window, cfg.stride);
    bands_.push_back(Band{band.width, band.height, coeff_total, energy_total});
    coeff_total += 2 * band.coeffs.size();
    energy_total += count;
  }
  window_count_ = energy_total;
  coeffs_.resize(coeff_total);
  energies_.resize(energy_total);

  detail::Scratch s;
  for (std::size_t b = 0; b < bands_.size(); ++b) {
    const auto& src = pyramid.subbands[b].coeffs;
    float* re = coeffs_.data() + bands_[b].coeff_offset;
    float* im = re + src.size();
    for (std::size_t i = 0; i < src.size(); ++i) {
      re[i] = static_cast<float>(src[i].real());
      im[i] = static_cast<float>(src[i].imag());
    }
    detail::band_energies(re, im, bands_[b].width, bands_[b].height, cfg.window, cfg.stride,
                          energies_.data() + bands_[b].energy_offset, s);
  }
}

double cwssim_score(const ScoringPyramid& a, const ScoringPyramid& b) {
  if (!(a.config() == b.config()) || a.width() != b.width() || a.height() != b.height()) {
    throw Error(ErrorCode::ConfigMismatch, "scoring pyramids differ in config or dimensions");
  }
  thread_local detail::Scratch s;
  const auto& cfg = a.config();
  double total = 0.0;
  const auto bands_a = a.bands();
  for (std::size_t i = 0; i < bands_a.size(); ++i) {
    const auto& band = bands_a[i];
    const std::size_t n = band.width * band.height;
    const float* are = a.coeffs().data() + band.coeff_offset;
    const float* bre = b.coeffs().data() + band.coeff_offset;
    total += detail::band_scores(are, are + n, bre, bre + n, a.energies().data() + band.energy_offset,
                                 b.energies().data() + band.energy_offset, band.width, band.height, cfg.window,
                                 cfg.stride, cfg.k, s);
  }
  if (std::isnan(total)) throw Error(ErrorCode::DegenerateZero, "zero-energy window with K == 0");
  return total / static_cast<double>(a.window_count());
}

}  // namespace cwknn

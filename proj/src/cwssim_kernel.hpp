#pragma once

// Shared sliding-window machinery for the full-precision and float-cached
// CW-SSIM paths. Window sums are formed vertically first, then horizontally,
// always in the same order so both paths round identically.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

namespace cwknn::detail {

inline std::size_t window_positions(std::size_t extent, std::size_t window, std::size_t stride) {
  return extent < window ? 0 : (extent - window) / stride + 1;
}

/// out[j*nx + i] = sum of `values` over the window with top-left corner
/// (i*stride, j*stride). `column` is scratch of at least ny*width doubles.
inline void window_sums(const double* __restrict values, std::size_t width, std::size_t height,
                        std::size_t window, std::size_t stride, double* __restrict out,
                        double* __restrict column) {
  const std::size_t nx = window_positions(width, window, stride);
  const std::size_t ny = window_positions(height, window, stride);
  if (stride == 1 && ny > 0) {
    // Running column sums: add the row entering the window, drop the one leaving.
    double* __restrict col = column;
    for (std::size_t x = 0; x < width; ++x) col[x] = values[x];
    for (std::size_t dy = 1; dy < window; ++dy) {
      const double* __restrict row = values + dy * width;
      for (std::size_t x = 0; x < width; ++x) col[x] += row[x];
    }
    for (std::size_t j = 1; j < ny; ++j) {
      const double* __restrict prev = column + (j - 1) * width;
      double* __restrict cur = column + j * width;
      const double* __restrict enter = values + (j + window - 1) * width;
      const double* __restrict leave = values + (j - 1) * width;
      for (std::size_t x = 0; x < width; ++x) cur[x] = (prev[x] + enter[x]) - leave[x];
    }
  } else {
    for (std::size_t j = 0; j < ny; ++j) {
      double* __restrict col = column + j * width;
      const double* __restrict first = values + j * stride * width;
      for (std::size_t x = 0; x < width; ++x) col[x] = first[x];
      for (std::size_t dy = 1; dy < window; ++dy) {
        const double* __restrict row = first + dy * width;
        for (std::size_t x = 0; x < width; ++x) col[x] += row[x];
      }
    }
  }
  for (std::size_t j = 0; j < ny; ++j) {
    const double* __restrict col = column + j * width;
    double* __restrict dst = out + j * nx;
    if (stride == 1) {
      for (std::size_t i = 0; i < nx; ++i) dst[i] = col[i];
      for (std::size_t dx = 1; dx < window; ++dx) {
        for (std::size_t i = 0; i < nx; ++i) dst[i] += col[i + dx];
      }
    } else {
      for (std::size_t i = 0; i < nx; ++i) {
        double acc = col[i * stride];
        for (std::size_t dx = 1; dx < window; ++dx) acc += col[i * stride + dx];
        dst[i] = acc;
      }
    }
  }
}

/// Sum with eight interleaved partial accumulators combined in a fixed order.
inline double ordered_sum(const double* __restrict v, std::size_t n) {
  double part[8] = {};
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    for (std::size_t l = 0; l < 8; ++l) part[l] += v[i + l];
  }
  for (std::size_t l = 0; i < n; ++i, ++l) part[l] += v[i];
  return ((part[0] + part[1]) + (part[2] + part[3])) + ((part[4] + part[5]) + (part[6] + part[7]));
}

struct Scratch {
  std::vector<double> cross_re, cross_im, sum_re, sum_im, column, energy, scores;

  void reserve(std::size_t pixels, std::size_t windows) {
    if (cross_re.size() < pixels) {
      cross_re.resize(pixels);
      cross_im.resize(pixels);
      column.resize(pixels);
      energy.resize(pixels);
    }
    if (sum_re.size() < windows) {
      sum_re.resize(windows);
      sum_im.resize(windows);
      scores.resize(windows);
    }
  }
};

/// Window energies sum |c|^2 of one band.
template <class T>
void band_energies(const T* __restrict re, const T* __restrict im, std::size_t width, std::size_t height,
                   std::size_t window, std::size_t stride, double* out, Scratch& s) {
  const std::size_t n = width * height;
  s.reserve(n, window_positions(width, window, stride) * window_positions(height, window, stride));
  double* __restrict e = s.energy.data();
  for (std::size_t i = 0; i < n; ++i) {
    const double r = re[i];
    const double m = im[i];
    e[i] = r * r + m * m;
  }
  window_sums(e, width, height, window, stride, out, s.column.data());
}

/// Writes per-window CW-SSIM values of one band pair into s.scores[0, count)
/// and returns their sum. NaN propagates when a window is 0/0.
template <class T>
double band_scores(const T* __restrict are, const T* __restrict aim, const T* __restrict bre,
                   const T* __restrict bim, const double* __restrict ea, const double* __restrict eb,
                   std::size_t width, std::size_t height, std::size_t window, std::size_t stride, double k,
                   Scratch& s) {
  const std::size_t n = width * height;
  const std::size_t count = window_positions(width, window, stride) * window_positions(height, window, stride);
  s.reserve(n, count);
  double* __restrict cr = s.cross_re.data();
  double* __restrict ci = s.cross_im.data();
  for (std::size_t i = 0; i < n; ++i) {
    const double ar = are[i], ai = aim[i], br = bre[i], bi = bim[i];
    // a * conj(b)
    cr[i] = ar * br + ai * bi;
    ci[i] = ai * br - ar * bi;
  }
  double* __restrict sr = s.sum_re.data();
  double* __restrict si = s.sum_im.data();
  window_sums(cr, width, height, window, stride, sr, s.column.data());
  window_sums(ci, width, height, window, stride, si, s.column.data());
  double* __restrict scores = s.scores.data();
  for (std::size_t i = 0; i < count; ++i) {
    const double mag = std::sqrt(sr[i] * sr[i] + si[i] * si[i]);
    const double v = (2.0 * mag + k) / (ea[i] + eb[i] + k);
    scores[i] = std::min(v, 1.0);
  }
  return ordered_sum(scores, count);
}

}  // namespace cwknn::detail

#pragma once

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include "rivid/image/image.hpp"

namespace rivid {

/// Per-pixel weighting map for the masked reconstruction loss. One 2-D mask
/// is broadcast over the color channels. Weights are in [0,1] with the peak
/// normalized to exactly 1, so an all-foreground mask reduces the masked
/// loss to plain MSE.
struct ForegroundMask {
  int height = 0;
  int width = 0;
  std::vector<double> weights;

  ForegroundMask() = default;
  ForegroundMask(int h, int w) : height(h), width(w), weights(static_cast<std::size_t>(h) * w, 0.0) {}

  double at(int y, int x) const { return weights[static_cast<std::size_t>(y) * width + x]; }
  double& at(int y, int x) { return weights[static_cast<std::size_t>(y) * width + x]; }
};

namespace detail {

/// 1-D Gaussian profile peaking at exactly 1 on the central sample(s).
inline std::vector<double> gaussian_profile(int n, double sigma_frac) {
  const double center = (n - 1) / 2.0;
  const double sigma = sigma_frac * n / 2.0;
  std::vector<double> p(n);
  double peak = 0.0;
  for (int i = 0; i < n; ++i) {
    const double d = i - center;
    p[i] = std::exp(-d * d / (2.0 * sigma * sigma));
    peak = std::max(peak, p[i]);
  }
  for (double& v : p) v /= peak;
  return p;
}

}  // namespace detail

/// Center-prior mask: separable Gaussian with sigma = sigma_frac * extent / 2
/// per axis. With the default sigma_frac the border falls to about exp(-2).
inline ForegroundMask gaussian_mask(int height, int width, double sigma_frac = 0.5) {
  if (height < 1 || width < 1) throw std::invalid_argument("gaussian_mask: non-positive dims");
  if (!(sigma_frac > 0.0)) throw std::invalid_argument("gaussian_mask: sigma_frac must be > 0");
  const auto py = detail::gaussian_profile(height, sigma_frac);
  const auto px = detail::gaussian_profile(width, sigma_frac);
  ForegroundMask m(height, width);
  for (int y = 0; y < height; ++y)
    for (int x = 0; x < width; ++x)
      m.at(y, x) = py[y] * px[x];
  return m;
}

inline ForegroundMask ones_mask(int height, int width) {
  if (height < 1 || width < 1) throw std::invalid_argument("ones_mask: non-positive dims");
  ForegroundMask m(height, width);
  std::fill(m.weights.begin(), m.weights.end(), 1.0);
  return m;
}

/// Loads a segmentation-style mask file (e.g. person silhouettes) and
/// rescales it so the maximum weight is exactly 1.
inline ForegroundMask external_mask(const std::string& path) {
  const ImageTensor img = load_image(path);
  ForegroundMask m(img.height, img.width);
  double peak = 0.0;
  for (int y = 0; y < img.height; ++y)
    for (int x = 0; x < img.width; ++x) {
      const double v = (img.at(0, y, x) + img.at(1, y, x) + img.at(2, y, x)) / 3.0;
      m.at(y, x) = v;
      peak = std::max(peak, v);
    }
  if (peak <= 0.0) throw std::runtime_error("external mask is all zero: " + path);
  for (double& v : m.weights) v /= peak;
  return m;
}

inline void check_mask_size(const ForegroundMask& m, int height, int width,
                            const std::string& what) {
  if (m.height != height || m.width != width)
    throw std::runtime_error(what + ": mask size " + std::to_string(m.height) + "x" +
                             std::to_string(m.width) + " does not match image " +
                             std::to_string(height) + "x" + std::to_string(width));
}

/// Process-wide cache of Gaussian masks keyed by (h, w, sigma); canonical-size
/// masks are requested once per batch otherwise.
inline const ForegroundMask& cached_gaussian_mask(int height, int width, double sigma_frac = 0.5) {
  static std::mutex mu;
  static std::map<std::tuple<int, int, double>, std::unique_ptr<ForegroundMask>> cache;
  std::lock_guard<std::mutex> lk(mu);
  auto key = std::make_tuple(height, width, sigma_frac);
  auto it = cache.find(key);
  if (it == cache.end()) {
    it = cache.emplace(key, std::make_unique<ForegroundMask>(
                                gaussian_mask(height, width, sigma_frac))).first;
  }
  return *it->second;
}

}  // namespace rivid

#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "rivid/image/image.hpp"

namespace rivid {

/// Resolution of an image of the given width within a dataset whose widest
/// image has width_max pixels: width / width_max in (0,1].
inline double resolution_of(int width, int width_max) {
  if (width <= 0 || width_max <= 0)
    throw std::invalid_argument("resolution_of: non-positive width");
  if (width > width_max)
    throw std::invalid_argument("resolution_of: width exceeds width_max");
  return static_cast<double>(width) / static_cast<double>(width_max);
}

namespace detail {

struct AxisTap {
  int first = 0;
  std::vector<double> weights;  // normalized, sum 1
};

/// Pixel-mixing (area) weights for shrinking an axis from `in` to `out`.
inline std::vector<AxisTap> box_taps(int in, int out) {
  std::vector<AxisTap> taps(out);
  const double scale = static_cast<double>(in) / out;
  for (int o = 0; o < out; ++o) {
    const double lo = o * scale;
    const double hi = (o + 1) * scale;
    int first = static_cast<int>(std::floor(lo));
    int last = static_cast<int>(std::ceil(hi)) - 1;
    if (last >= in) last = in - 1;
    AxisTap t;
    t.first = first;
    double total = 0.0;
    for (int s = first; s <= last; ++s) {
      const double cover = std::min<double>(hi, s + 1) - std::max<double>(lo, s);
      t.weights.push_back(cover > 0 ? cover : 0.0);
      total += t.weights.back();
    }
    for (double& w : t.weights) w /= total;
    taps[o] = std::move(t);
  }
  return taps;
}

/// Linear interpolation weights for growing an axis, corner samples pinned to
/// corner samples (so enlarging never invents values at the frame edges).
inline std::vector<AxisTap> linear_taps(int in, int out) {
  std::vector<AxisTap> taps(out);
  for (int o = 0; o < out; ++o) {
    AxisTap t;
    if (in == 1 || out == 1) {
      t.first = 0;
      t.weights = {1.0};
    } else {
      // Exact rational position: integer product first, then one division.
      const double pos = static_cast<double>(static_cast<long long>(o) * (in - 1)) / (out - 1);
      int i0 = static_cast<int>(std::floor(pos));
      if (i0 >= in - 1) i0 = in - 2;
      const double f = pos - i0;
      t.first = i0;
      if (f == 0.0)
        t.weights = {1.0};
      else
        t.weights = {1.0 - f, f};
    }
    taps[o] = std::move(t);
  }
  return taps;
}

inline std::vector<AxisTap> taps_for(int in, int out) {
  if (out == in) {
    std::vector<AxisTap> taps(out);
    for (int o = 0; o < out; ++o) taps[o] = {o, {1.0}};
    return taps;
  }
  return out < in ? box_taps(in, out) : linear_taps(in, out);
}

inline ImageTensor apply_separable(const ImageTensor& img, int oh, int ow) {
  const auto ytaps = taps_for(img.height, oh);
  const auto xtaps = taps_for(img.width, ow);
  ImageTensor out(oh, ow);
  std::vector<double> tmp(static_cast<std::size_t>(img.height) * ow);
  for (int ch = 0; ch < 3; ++ch) {
    const double* src = img.channel(ch);
    // Horizontal pass in double, then vertical.
    for (int y = 0; y < img.height; ++y) {
      const double* row = src + static_cast<std::size_t>(y) * img.width;
      for (int x = 0; x < ow; ++x) {
        const AxisTap& t = xtaps[x];
        double acc = 0.0;
        for (std::size_t k = 0; k < t.weights.size(); ++k)
          acc += t.weights[k] * row[t.first + k];
        tmp[static_cast<std::size_t>(y) * ow + x] = acc;
      }
    }
    double* dst = out.channel(ch);
    for (int y = 0; y < oh; ++y) {
      const AxisTap& t = ytaps[y];
      for (int x = 0; x < ow; ++x) {
        double acc = 0.0;
        for (std::size_t k = 0; k < t.weights.size(); ++k)
          acc += t.weights[k] * tmp[(t.first + k) * static_cast<std::size_t>(ow) + x];
        dst[static_cast<std::size_t>(y) * ow + x] = acc < 0.0 ? 0.0 : (acc > 1.0 ? 1.0 : acc);
      }
    }
  }
  return out;
}

inline int round_half_up(double v) { return static_cast<int>(std::floor(v + 0.5)); }

}  // namespace detail

/// Area-averaging downscale by `ratio` in (0,1]; output size is
/// round-half-up(ratio * size) per axis. ratio == 1 returns a bitwise copy.
inline ImageTensor downsample(const ImageTensor& img, double ratio) {
  if (!(ratio > 0.0 && ratio <= 1.0))
    throw std::invalid_argument("downsample: ratio outside (0,1]");
  if (ratio == 1.0) return img;
  const int oh = detail::round_half_up(ratio * img.height);
  const int ow = detail::round_half_up(ratio * img.width);
  if (ow < 4 || oh < 1)
    throw std::invalid_argument("downsample: resulting width below minimum");
  return detail::apply_separable(img, oh, ow);
}

/// Bilinear enlarge to exactly (height, width); target must be >= source on
/// both axes. Corner samples map to corner samples.
inline ImageTensor upsample_to(const ImageTensor& img, int height, int width) {
  if (height < img.height || width < img.width)
    throw std::invalid_argument("upsample_to: target smaller than source");
  if (height == img.height && width == img.width) return img;
  return detail::apply_separable(img, height, width);
}

/// General resize: per axis, area averaging when shrinking and bilinear when
/// growing. Used by canonical-size preprocessing where aspect may differ.
inline ImageTensor resize_to(const ImageTensor& img, int height, int width) {
  if (height <= 0 || width <= 0) throw std::invalid_argument("resize_to: bad target");
  if (height == img.height && width == img.width) return img;
  return detail::apply_separable(img, height, width);
}

}  // namespace rivid

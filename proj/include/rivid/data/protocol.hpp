#pragma once

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "rivid/core/parallel.hpp"
#include "rivid/core/rng.hpp"
#include "rivid/data/manifest.hpp"
#include "rivid/image/resample.hpp"

namespace rivid {

/// Benchmark degradation protocols: MLR draws a downscale ratio per image
/// from a fixed set; VR draws an integer target width from [lo, hi).
struct DegradeProtocol {
  enum class Kind { mlr, vr };
  Kind kind = Kind::vr;
  std::vector<double> mlr_ratios{0.5, 1.0 / 3.0, 0.25};
  int vr_lo = 8;
  int vr_hi = 32;
  std::uint64_t seed = 0;

  void validate() const {
    if (kind == Kind::mlr) {
      if (mlr_ratios.empty()) throw std::invalid_argument("protocol: empty MLR ratio set");
      for (double r : mlr_ratios)
        if (!(r > 0.0 && r <= 1.0))
          throw std::invalid_argument("protocol: MLR ratio outside (0,1]");
    } else {
      if (!(4 <= vr_lo && vr_lo < vr_hi))
        throw std::invalid_argument("protocol: VR range must satisfy 4 <= lo < hi");
    }
  }
};

/// Applies the protocol to every entry of the manifest, writing degraded
/// images under out_dir/images. Entries keep person_id, hr_path and
/// mask_path; input_path points at the degraded file and resolution is
/// recomputed from the actual degraded width. A drawn ratio of exactly 1
/// reuses the source file without rewriting it. Deterministic given the
/// protocol seed; the per-image stream depends on (seed, entry index) only.
inline Manifest apply_protocol(const Manifest& in, const DegradeProtocol& protocol,
                               const fs::path& out_dir) {
  protocol.validate();
  if (in.entries.empty()) throw std::runtime_error("apply_protocol: empty manifest");
  fs::create_directories(out_dir / "images");

  Manifest out;
  out.width_max = in.width_max;
  out.split = in.split;
  out.base_dir = out_dir;
  out.entries.resize(in.entries.size());

  parallel_for(static_cast<std::int64_t>(in.entries.size()), [&](std::int64_t i) {
    const ManifestEntry& src = in.entries[i];
    Rng rng = Rng::derive(protocol.seed, "degrade", i);
    const fs::path src_abs = fs::absolute(in.resolve(src.input_path));

    double ratio = 1.0;
    if (protocol.kind == DegradeProtocol::Kind::mlr) {
      ratio = protocol.mlr_ratios[rng.uniform_int(
          0, static_cast<std::int64_t>(protocol.mlr_ratios.size()))];
    } else {
      const int target_w = static_cast<int>(rng.uniform_int(protocol.vr_lo, protocol.vr_hi));
      const ImageSize sz = probe_image_size(src_abs.string());
      if (target_w > sz.width)
        throw std::runtime_error("apply_protocol: VR target width " + std::to_string(target_w) +
                                 " exceeds source width of " + src.input_path);
      ratio = static_cast<double>(target_w) / sz.width;
    }

    ManifestEntry e = src;
    if (ratio == 1.0) {
      // no-op entry: point back at the untouched source file
      e.input_path = fs::relative(src_abs, fs::absolute(out_dir)).generic_string();
    } else {
      const ImageTensor degraded = downsample(load_image(src_abs.string()), ratio);
      char name[64];
      std::snprintf(name, sizeof name, "%05d_%s", static_cast<int>(i),
                    src_abs.filename().string().c_str());
      e.input_path = std::string("images/") + name;
      save_image_png(degraded, (out_dir / e.input_path).string());
      e.resolution = resolution_of(degraded.width, in.width_max);
    }
    if (!src.hr_path.empty())
      e.hr_path = fs::relative(fs::absolute(in.resolve(src.hr_path)), fs::absolute(out_dir))
                      .generic_string();
    if (!src.mask_path.empty())
      e.mask_path = fs::relative(fs::absolute(in.resolve(src.mask_path)), fs::absolute(out_dir))
                        .generic_string();
    out.entries[i] = std::move(e);
  });
  return out;
}

}  // namespace rivid

#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "rivid/core/kv_config.hpp"
#include "rivid/core/parallel.hpp"
#include "rivid/core/rng.hpp"
#include "rivid/data/manifest.hpp"
#include "rivid/image/image.hpp"

namespace rivid {

/// Controls for the synthetic person-image generator. Identities carry both
/// coarse cues (clothing colors, silhouette) that survive heavy downscaling
/// and fine cues (thin stripes, hair band) that do not, so resolution
/// robustness is measurable on a desk-scale corpus.
struct SynthSpec {
  int n_identities = 32;
  int images_per_identity = 20;
  int canvas_height = 128;
  int canvas_width = 64;
  // appearance
  double color_min_sep = 0.18;  // pairwise L-inf separation of clothing colors
  // nuisance (varies per image, never per identity)
  int clutter_min = 6;
  int clutter_max = 12;
  double illum_lo = 0.75;
  double illum_hi = 1.10;
  int jitter_px = 4;
  std::uint64_t seed = 0;

  static SynthSpec from_config(KvConfig& cfg) {
    SynthSpec s;
    s.n_identities = static_cast<int>(cfg.get_int("n_identities", s.n_identities));
    s.images_per_identity =
        static_cast<int>(cfg.get_int("images_per_identity", s.images_per_identity));
    s.canvas_height = static_cast<int>(cfg.get_int("canvas_height", s.canvas_height));
    s.canvas_width = static_cast<int>(cfg.get_int("canvas_width", s.canvas_width));
    s.color_min_sep = cfg.get_double("color_min_sep", s.color_min_sep);
    s.clutter_min = static_cast<int>(cfg.get_int("clutter_min", s.clutter_min));
    s.clutter_max = static_cast<int>(cfg.get_int("clutter_max", s.clutter_max));
    s.illum_lo = cfg.get_double("illum_lo", s.illum_lo);
    s.illum_hi = cfg.get_double("illum_hi", s.illum_hi);
    s.jitter_px = static_cast<int>(cfg.get_int("jitter_px", s.jitter_px));
    s.seed = static_cast<std::uint64_t>(cfg.get_int("seed", 0));
    cfg.reject_unknown_keys();
    return s;
  }
};

using Rgb = std::array<double, 3>;

/// Per-identity clothing description. Fine attributes are the stripe tuple
/// and hair-band color index; coarse attributes are the clothing colors and
/// silhouette proportions.
struct IdentityAttrs {
  Rgb torso_color{};
  Rgb pant_color{};
  Rgb stripe_color{};
  int stripe_orient = 0;     // 0 horizontal, 1 vertical
  int stripe_count = 2;      // 2..6
  int stripe_thickness = 1;  // 1..2
  int band_index = 0;        // hair-band palette entry, 0..3
  double body_width = 0.45;  // torso width as a fraction of canvas width
  double head_radius = 0.10; // fraction of canvas width
  double leg_gap = 0.10;     // fraction of canvas width
};

namespace synth_detail {

inline const std::array<Rgb, 4>& band_palette() {
  static const std::array<Rgb, 4> p{{{0.85, 0.15, 0.15},
                                     {0.90, 0.85, 0.15},
                                     {0.15, 0.35, 0.90},
                                     {0.15, 0.80, 0.30}}};
  return p;
}

inline double linf(const Rgb& a, const Rgb& b) {
  double d = 0;
  for (int i = 0; i < 3; ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

inline Rgb random_color(Rng& rng, double lo = 0.08, double hi = 0.95) {
  return {rng.uniform(lo, hi), rng.uniform(lo, hi), rng.uniform(lo, hi)};
}

/// Assigns identity attributes: fine tuples are distinct by enumeration, and
/// clothing-color pairs are rejection-sampled to a minimum separation.
inline std::vector<IdentityAttrs> make_identities(const SynthSpec& spec) {
  struct Combo { int orient, count, thickness, band; };
  std::vector<Combo> combos;
  for (int orient = 0; orient < 2; ++orient)
    for (int count = 2; count <= 6; ++count)
      for (int thickness = 1; thickness <= 2; ++thickness)
        for (int band = 0; band < 4; ++band)
          combos.push_back({orient, count, thickness, band});
  if (spec.n_identities > static_cast<int>(combos.size()))
    throw std::runtime_error("synth: more identities than distinct fine-attribute tuples (" +
                             std::to_string(combos.size()) + ")");
  Rng shuffle_rng = Rng::derive(spec.seed, "combos");
  for (std::size_t i = combos.size(); i > 1; --i)
    std::swap(combos[i - 1], combos[shuffle_rng.uniform_int(0, static_cast<std::int64_t>(i))]);

  std::vector<IdentityAttrs> ids(spec.n_identities);
  for (int i = 0; i < spec.n_identities; ++i) {
    Rng rng = Rng::derive(spec.seed, "identity", i);
    IdentityAttrs& a = ids[i];
    a.stripe_orient = combos[i].orient;
    a.stripe_count = combos[i].count;
    a.stripe_thickness = combos[i].thickness;
    a.band_index = combos[i].band;
    a.body_width = rng.uniform(0.38, 0.55);
    a.head_radius = rng.uniform(0.09, 0.13);
    a.leg_gap = rng.uniform(0.06, 0.14);
    for (int attempt = 0;; ++attempt) {
      a.torso_color = random_color(rng);
      a.pant_color = random_color(rng);
      bool ok = true;
      for (int j = 0; j < i && ok; ++j) {
        const double sep = std::max(linf(a.torso_color, ids[j].torso_color),
                                    linf(a.pant_color, ids[j].pant_color));
        ok = sep >= spec.color_min_sep;
      }
      if (ok) break;
      if (attempt > 20000)
        throw std::runtime_error("synth: cannot separate clothing colors; lower color_min_sep");
    }
    // stripes must contrast with the torso they sit on
    do {
      a.stripe_color = random_color(rng);
    } while (linf(a.stripe_color, a.torso_color) < 0.35);
  }
  return ids;
}

struct Canvas {
  ImageTensor img;
  std::vector<std::uint8_t> fg;  // person silhouette

  Canvas(int h, int w) : img(h, w), fg(static_cast<std::size_t>(h) * w, 0) {}

  void put(int y, int x, const Rgb& c, bool foreground) {
    if (y < 0 || y >= img.height || x < 0 || x >= img.width) return;
    for (int ch = 0; ch < 3; ++ch) img.at(ch, y, x) = c[ch];
    if (foreground) fg[static_cast<std::size_t>(y) * img.width + x] = 1;
  }

  void rect(int y0, int y1, int x0, int x1, const Rgb& c, bool foreground) {
    for (int y = y0; y < y1; ++y)
      for (int x = x0; x < x1; ++x) put(y, x, c, foreground);
  }
};

inline void render_person(Canvas& cv, const IdentityAttrs& a, int dx) {
  const int h = cv.img.height, w = cv.img.width;
  const double cx = w / 2.0 + dx;
  const Rgb skin{0.85, 0.72, 0.60};

  const int head_r = std::max(2, static_cast<int>(a.head_radius * w));
  const int head_cy = static_cast<int>(0.15 * h);
  for (int y = head_cy - head_r; y <= head_cy + head_r; ++y)
    for (int x = static_cast<int>(cx) - head_r; x <= static_cast<int>(cx) + head_r; ++x) {
      const double dy = y - head_cy, dxx = x - cx;
      if (dy * dy + dxx * dxx <= head_r * head_r) cv.put(y, x, skin, true);
    }
  // hair band: a two-row fine cue across the top of the head
  cv.rect(head_cy - head_r, head_cy - head_r + 2, static_cast<int>(cx) - head_r,
          static_cast<int>(cx) + head_r + 1, band_palette()[a.band_index], true);

  const int torso_y0 = static_cast<int>(0.24 * h), torso_y1 = static_cast<int>(0.56 * h);
  const int bw = static_cast<int>(a.body_width * w);
  const int tx0 = static_cast<int>(cx - bw / 2.0), tx1 = tx0 + bw;
  cv.rect(torso_y0, torso_y1, tx0, tx1, a.torso_color, true);

  // arms as thin strips flanking the torso
  cv.rect(torso_y0 + 2, static_cast<int>(0.50 * h), tx0 - 2, tx0, a.torso_color, true);
  cv.rect(torso_y0 + 2, static_cast<int>(0.50 * h), tx1, tx1 + 2, a.torso_color, true);

  // stripe pattern: the fine identity cue
  if (a.stripe_orient == 0) {
    const double step = static_cast<double>(torso_y1 - torso_y0) / (a.stripe_count + 1);
    for (int s = 1; s <= a.stripe_count; ++s) {
      const int y = torso_y0 + static_cast<int>(s * step);
      cv.rect(y, y + a.stripe_thickness, tx0, tx1, a.stripe_color, true);
    }
  } else {
    const double step = static_cast<double>(bw) / (a.stripe_count + 1);
    for (int s = 1; s <= a.stripe_count; ++s) {
      const int x = tx0 + static_cast<int>(s * step);
      cv.rect(torso_y0, torso_y1, x, x + a.stripe_thickness, a.stripe_color, true);
    }
  }

  const int leg_y1 = static_cast<int>(0.93 * h);
  const int gap = std::max(1, static_cast<int>(a.leg_gap * w));
  const int leg_w = std::max(2, (bw - gap) / 2);
  cv.rect(torso_y1, leg_y1, tx0, tx0 + leg_w, a.pant_color, true);
  cv.rect(torso_y1, leg_y1, tx1 - leg_w, tx1, a.pant_color, true);
}

inline Canvas render_image(const SynthSpec& spec, const IdentityAttrs& attrs, int identity,
                           int image_index) {
  Rng rng = Rng::derive(spec.seed, "image", identity, image_index);
  Canvas cv(spec.canvas_height, spec.canvas_width);

  const Rgb bg = random_color(rng, 0.05, 0.55);
  cv.rect(0, spec.canvas_height, 0, spec.canvas_width, bg, false);
  const int clutter = static_cast<int>(rng.uniform_int(spec.clutter_min, spec.clutter_max + 1));
  for (int k = 0; k < clutter; ++k) {
    const int y0 = static_cast<int>(rng.uniform_int(0, spec.canvas_height));
    const int x0 = static_cast<int>(rng.uniform_int(0, spec.canvas_width));
    const int ry = static_cast<int>(rng.uniform_int(2, std::max(3, spec.canvas_height / 3)));
    const int rx = static_cast<int>(rng.uniform_int(2, std::max(3, spec.canvas_width / 3)));
    cv.rect(y0, y0 + ry, x0, x0 + rx, random_color(rng, 0.0, 1.0), false);
  }

  const int dx = static_cast<int>(rng.uniform_int(-spec.jitter_px, spec.jitter_px + 1));
  render_person(cv, attrs, dx);

  const double illum = rng.uniform(spec.illum_lo, spec.illum_hi);
  for (double& v : cv.img.data) v = std::clamp(v * illum, 0.0, 1.0);
  return cv;
}

}  // namespace synth_detail

struct SynthOutput {
  fs::path dir;
  Manifest train, query, gallery;
};

/// Renders the corpus and writes images/, masks/ and the three manifest
/// splits under out_dir. Identities are disjoint between train and test;
/// test images alternate between gallery (even index) and query (odd).
/// Deterministic: the per-image RNG stream depends only on (seed, identity,
/// image index).
inline SynthOutput synth_corpus(const SynthSpec& spec, const fs::path& out_dir) {
  if (spec.n_identities < 2) throw std::invalid_argument("synth: need at least 2 identities");
  if (spec.images_per_identity < 1)
    throw std::invalid_argument("synth: need at least 1 image per identity");
  if (spec.canvas_height < 32 || spec.canvas_width < 16)
    throw std::runtime_error("synth: canvas too small to draw the identity patterns");

  const auto identities = synth_detail::make_identities(spec);
  fs::create_directories(out_dir / "images");
  fs::create_directories(out_dir / "masks");

  const int total = spec.n_identities * spec.images_per_identity;
  std::vector<ManifestEntry> entries(total);
  parallel_for(total, [&](std::int64_t k) {
    const int id = static_cast<int>(k) / spec.images_per_identity;
    const int j = static_cast<int>(k) % spec.images_per_identity;
    auto cv = synth_detail::render_image(spec, identities[id], id, j);
    char name[64];
    std::snprintf(name, sizeof name, "id%03d_im%03d.png", id, j);
    save_image_png(cv.img, (out_dir / "images" / name).string());
    std::vector<double> mask(cv.fg.begin(), cv.fg.end());
    save_gray_png(mask, cv.img.height, cv.img.width, (out_dir / "masks" / name).string());
    ManifestEntry e;
    e.input_path = std::string("images/") + name;
    e.hr_path = e.input_path;
    e.mask_path = std::string("masks/") + name;
    e.person_id = id;
    e.resolution = 1.0;
    entries[k] = std::move(e);
  });

  SynthOutput out;
  out.dir = out_dir;
  const int train_ids = spec.n_identities / 2;
  for (auto* m : {&out.train, &out.query, &out.gallery}) {
    m->width_max = spec.canvas_width;
    m->base_dir = out_dir;
  }
  out.train.split = Split::train;
  out.query.split = Split::query;
  out.gallery.split = Split::gallery;
  for (int k = 0; k < total; ++k) {
    const int id = k / spec.images_per_identity;
    const int j = k % spec.images_per_identity;
    if (id < train_ids)
      out.train.entries.push_back(entries[k]);
    else if (j % 2 == 0)
      out.gallery.entries.push_back(entries[k]);
    else
      out.query.entries.push_back(entries[k]);
  }
  save_manifest(out.train, out_dir / "train.csv");
  save_manifest(out.query, out_dir / "query.csv");
  save_manifest(out.gallery, out_dir / "gallery.csv");
  return out;
}

}  // namespace rivid

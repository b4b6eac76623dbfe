#pragma once

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "rivid/image/image.hpp"
#include "rivid/image/resample.hpp"

namespace rivid {

namespace fs = std::filesystem;

enum class Split { train, query, gallery };

inline std::string to_string(Split s) {
  switch (s) {
    case Split::train: return "train";
    case Split::query: return "query";
    case Split::gallery: return "gallery";
  }
  throw std::logic_error("bad split");
}

inline Split split_from_string(const std::string& s) {
  if (s == "train") return Split::train;
  if (s == "query") return Split::query;
  if (s == "gallery") return Split::gallery;
  throw std::runtime_error("unknown split: " + s);
}

struct ManifestEntry {
  std::string input_path;  // relative to the manifest CSV's directory
  std::string hr_path;
  std::int64_t person_id = 0;
  double resolution = 1.0;
  std::string mask_path;  // optional foreground-mask file
};

/// A dataset split: entries plus the dataset-wide width_max the resolution
/// scalar is defined against. Serialized as a CSV with a JSON sidecar
/// (`<name>.meta.json`) carrying width_max and the split name.
struct Manifest {
  std::vector<ManifestEntry> entries;
  int width_max = 0;
  Split split = Split::train;
  fs::path base_dir;  // directory the paths are relative to

  fs::path resolve(const std::string& rel) const { return base_dir / rel; }

  std::vector<std::int64_t> identities() const {
    std::vector<std::int64_t> ids;
    for (const auto& e : entries) ids.push_back(e.person_id);
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
    return ids;
  }
};

namespace detail {

inline std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

inline std::string format_double(double v) {
  char buf[64];
  auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, p);
}

inline fs::path meta_path_for(const fs::path& csv) {
  fs::path p = csv;
  p.replace_extension(".meta.json");
  return p;
}

}  // namespace detail

/// Re-checks every invariant on an already-built manifest; loading calls this
/// and callers may call it again (it is idempotent and mutates nothing).
inline void validate_manifest(const Manifest& m, double tolerance = 1e-6) {
  if (m.width_max <= 0) throw std::runtime_error("manifest: width_max must be positive");
  for (std::size_t i = 0; i < m.entries.size(); ++i) {
    const auto& e = m.entries[i];
    const std::string where = "manifest row " + std::to_string(i + 1);
    if (e.person_id < 0) throw std::runtime_error(where + ": negative person_id");
    if (!(e.resolution > 0.0 && e.resolution <= 1.0))
      throw std::runtime_error(where + ": resolution outside (0,1]");
    const ImageSize sz = probe_image_size(m.resolve(e.input_path).string());
    const double actual = resolution_of(sz.width, m.width_max);
    if (std::abs(actual - e.resolution) > tolerance)
      throw std::runtime_error(where + ": stored resolution " +
                               detail::format_double(e.resolution) +
                               " does not match width ratio " +
                               detail::format_double(actual));
  }
}

/// Loads and validates a manifest CSV. Header must be
/// `input_path,hr_path,person_id,resolution` with an optional trailing
/// `mask_path` column; `#` lines are comments.
inline Manifest load_manifest(const fs::path& csv_path) {
  std::ifstream in(csv_path);
  if (!in) throw std::runtime_error("missing manifest file: " + csv_path.string());

  const fs::path meta_file = detail::meta_path_for(csv_path);
  std::ifstream meta_in(meta_file);
  if (!meta_in)
    throw std::runtime_error("missing manifest sidecar: " + meta_file.string());
  nlohmann::json meta = nlohmann::json::parse(meta_in);

  Manifest m;
  m.base_dir = csv_path.parent_path();
  m.width_max = meta.at("width_max").get<int>();
  m.split = split_from_string(meta.at("split").get<std::string>());

  std::string line;
  bool header_seen = false;
  bool has_mask_col = false;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    auto fields = detail::split_fields(line);
    if (!header_seen) {
      if (fields.size() < 4 || fields[0] != "input_path" || fields[1] != "hr_path" ||
          fields[2] != "person_id" || fields[3] != "resolution")
        throw std::runtime_error(csv_path.string() + ": bad manifest header");
      has_mask_col = fields.size() == 5 && fields[4] == "mask_path";
      if (fields.size() > 4 && !has_mask_col)
        throw std::runtime_error(csv_path.string() + ": unknown manifest columns");
      header_seen = true;
      continue;
    }
    const std::string where = csv_path.string() + ":" + std::to_string(lineno);
    if (fields.size() != (has_mask_col ? 5u : 4u))
      throw std::runtime_error(where + ": malformed row");
    ManifestEntry e;
    e.input_path = fields[0];
    e.hr_path = fields[1];
    {
      std::int64_t id = 0;
      auto [p, ec] = std::from_chars(fields[2].data(), fields[2].data() + fields[2].size(), id);
      if (ec != std::errc() || p != fields[2].data() + fields[2].size() || id < 0)
        throw std::runtime_error(where + ": person_id must be a non-negative integer");
      e.person_id = id;
    }
    try {
      std::size_t pos = 0;
      e.resolution = std::stod(fields[3], &pos);
      if (pos != fields[3].size()) throw std::invalid_argument(fields[3]);
    } catch (const std::exception&) {
      throw std::runtime_error(where + ": malformed resolution");
    }
    if (has_mask_col) e.mask_path = fields[4];
    m.entries.push_back(std::move(e));
  }
  if (!header_seen) throw std::runtime_error(csv_path.string() + ": empty manifest");
  validate_manifest(m);
  return m;
}

inline void save_manifest(const Manifest& m, const fs::path& csv_path) {
  const bool with_mask =
      std::any_of(m.entries.begin(), m.entries.end(),
                  [](const ManifestEntry& e) { return !e.mask_path.empty(); });
  std::ofstream out(csv_path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write manifest: " + csv_path.string());
  out << "input_path,hr_path,person_id,resolution";
  if (with_mask) out << ",mask_path";
  out << "\n";
  for (const auto& e : m.entries) {
    out << e.input_path << ',' << e.hr_path << ',' << e.person_id << ','
        << detail::format_double(e.resolution);
    if (with_mask) out << ',' << e.mask_path;
    out << "\n";
  }
  nlohmann::json meta{{"width_max", m.width_max}, {"split", to_string(m.split)}};
  std::ofstream meta_out(detail::meta_path_for(csv_path), std::ios::binary);
  meta_out << meta.dump(2) << "\n";
}

/// A loaded training/eval sample: possibly-degraded input, its HR pair, the
/// identity label and the pre-resize resolution scalar.
struct LabeledSample {
  ImageTensor image;
  ImageTensor hr_target;
  std::int64_t person_id = 0;
  double resolution = 1.0;
  std::string source_path;
  std::string mask_path;
};

inline LabeledSample load_sample(const Manifest& m, std::size_t index) {
  const auto& e = m.entries.at(index);
  LabeledSample s;
  s.image = load_image(m.resolve(e.input_path).string());
  s.hr_target = load_image(m.resolve(e.hr_path).string());
  s.person_id = e.person_id;
  s.resolution = e.resolution;
  s.source_path = m.resolve(e.input_path).string();
  if (!e.mask_path.empty()) s.mask_path = m.resolve(e.mask_path).string();
  return s;
}

/// Dense 0..C-1 relabeling (persisted with checkpoints so logits stay
/// interpretable across runs).
struct LabelMap {
  std::vector<std::int64_t> originals;  // sorted original ids

  static LabelMap from_manifest(const Manifest& m) { return LabelMap{m.identities()}; }

  int size() const { return static_cast<int>(originals.size()); }

  int dense(std::int64_t original) const {
    auto it = std::lower_bound(originals.begin(), originals.end(), original);
    if (it == originals.end() || *it != original)
      throw std::runtime_error("person_id not in label map: " + std::to_string(original));
    return static_cast<int>(it - originals.begin());
  }
};

}  // namespace rivid

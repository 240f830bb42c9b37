#include "rawsynth/dark_bank.hpp"

#include <algorithm>
#include <cstring>

#include "rawsynth/io.hpp"

namespace rawsynth {

void DarkBank::add_frame(const GainKey& key, RawFrame frame) {
  auto& group = groups_[key];
  if (!group.empty()) {
    const RawFrame& ref = group.front();
    if (frame.height != ref.height || frame.width != ref.width ||
        frame.cfa != ref.cfa || frame.bit_depth != ref.bit_depth)
      throw MixedGeometry("frame geometry/CFA mismatch within ISO group " +
                          std::to_string(key.iso));
  }
  group.push_back(std::move(frame));
}

const std::vector<RawFrame>& DarkBank::group(int iso, const std::string& tag) const {
  auto it = groups_.find(GainKey{iso, tag});
  if (it == groups_.end())
    throw UnknownGain("no dark-frame group for ISO " + std::to_string(iso) +
                      (tag.empty() ? "" : " tag " + tag));
  return it->second;
}

bool DarkBank::has_group(int iso, const std::string& tag) const {
  return groups_.count(GainKey{iso, tag}) > 0;
}

std::vector<GainKey> DarkBank::keys() const {
  std::vector<GainKey> out;
  out.reserve(groups_.size());
  for (const auto& [k, v] : groups_) out.push_back(k);
  return out;
}

DarkBank load_bank(const std::filesystem::path& dir, const SensorProfile& profile) {
  profile.validate();
  std::vector<std::filesystem::path> files;
  if (std::filesystem::is_directory(dir)) {
    for (const auto& entry : std::filesystem::directory_iterator(dir)) {
      if (!entry.is_regular_file()) continue;
      auto ext = entry.path().extension().string();
      if (ext == ".rawb" || ext == ".raw") files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end());
  if (files.empty()) throw EmptyBank("no RAWB files under " + dir.string());

  DarkBank bank(profile);
  for (const auto& path : files) {
    RawFrame frame = path.extension() == ".raw" ? read_raw_with_sidecar(path)
                                                : read_rawb(path);
    bank.add_frame(GainKey{int(frame.iso), ""}, std::move(frame));
  }
  return bank;
}

DarkShading calibrate_shading(const DarkBank& bank, int iso,
                              const std::optional<std::vector<int>>& subset,
                              const std::string& tag) {
  const auto& frames = bank.group(iso, tag);

  std::vector<int> indices;
  if (subset) {
    if (subset->empty()) throw EmptySubset("empty calibration subset");
    for (int i : *subset)
      if (i < 0 || std::size_t(i) >= frames.size())
        throw InvariantViolation("subset index out of range");
    indices = *subset;
  } else {
    indices.resize(frames.size());
    for (std::size_t i = 0; i < frames.size(); ++i) indices[i] = int(i);
  }

  const RawFrame& ref = frames.front();
  const std::size_t n_pix = ref.pixels.size();
  DarkShading shading;
  shading.height = ref.height;
  shading.width = ref.width;
  shading.iso = iso;
  shading.frame_count = int(indices.size());
  shading.mean_map.assign(n_pix, 0.0);

  // Kahan accumulation in fixed index order keeps the map bit-reproducible.
  std::vector<double> comp(n_pix, 0.0);
  for (int idx : indices) {
    const RawFrame& f = frames[std::size_t(idx)];
    for (std::size_t p = 0; p < n_pix; ++p) {
      double term = double(f.pixels[p]) - double(f.black_level);
      double y = term - comp[p];
      double t = shading.mean_map[p] + y;
      comp[p] = (t - shading.mean_map[p]) - y;
      shading.mean_map[p] = t;
    }
  }
  const double inv_n = 1.0 / double(indices.size());
  for (double& v : shading.mean_map) v *= inv_n;
  return shading;
}

namespace {

void check_crop(const Crop& crop, const Flips& flips, int height, int width) {
  if (crop.h <= 0 || crop.w <= 0 || crop.y < 0 || crop.x < 0 ||
      crop.y % 2 || crop.x % 2 || crop.h % 2 || crop.w % 2)
    throw BadCrop("crop must be even-aligned with even, positive extent");
  // a flipped axis reads the window shifted by one step to keep CFA phase
  int y_end = crop.y + crop.h + (flips.vertical ? 1 : 0);
  int x_end = crop.x + crop.w + (flips.horizontal ? 1 : 0);
  if (y_end > height || x_end > width)
    throw BadCrop("crop (incl. flip phase shift) exceeds frame bounds");
}

// Source position for output (r, c) under CFA-phase-preserving flips: a
// flipped axis maps j -> origin + extent - j, which lands on the same CFA
// parity as j.
inline int src_row(const Crop& crop, const Flips& flips, int r) {
  return flips.vertical ? crop.y + crop.h - r : crop.y + r;
}
inline int src_col(const Crop& crop, const Flips& flips, int c) {
  return flips.horizontal ? crop.x + crop.w - c : crop.x + c;
}

}  // namespace

LinearFrame crop_flip(const LinearFrame& frame, const Crop& crop, const Flips& flips) {
  check_crop(crop, flips, frame.height, frame.width);
  LinearFrame out;
  out.height = crop.h;
  out.width = crop.w;
  out.cfa = frame.cfa;
  out.bit_depth = frame.bit_depth;
  out.black_level = frame.black_level;
  out.white_level = frame.white_level;
  out.iso = frame.iso;
  out.analog_gain = frame.analog_gain;
  out.values.resize(std::size_t(crop.h) * crop.w);
  for (int r = 0; r < crop.h; ++r)
    for (int c = 0; c < crop.w; ++c)
      out.at(r, c) = frame.at(src_row(crop, flips, r), src_col(crop, flips, c));
  return out;
}

LinearFrame dark_patch(const DarkBank& bank, int iso, const DarkShading& shading,
                       int frame_index, const Crop& crop, const Flips& flips,
                       const std::string& tag) {
  const auto& frames = bank.group(iso, tag);
  if (frame_index < 0 || std::size_t(frame_index) >= frames.size())
    throw InvariantViolation("dark frame index out of range");
  const RawFrame& frame = frames[std::size_t(frame_index)];
  if (shading.height != frame.height || shading.width != frame.width)
    throw GeometryMismatch("shading map geometry does not match dark frames");
  check_crop(crop, flips, frame.height, frame.width);

  LinearFrame out;
  out.height = crop.h;
  out.width = crop.w;
  out.cfa = frame.cfa;
  out.bit_depth = frame.bit_depth;
  out.black_level = frame.black_level;
  out.white_level = frame.white_level;
  out.iso = frame.iso;
  out.analog_gain = frame.analog_gain;
  out.values.resize(std::size_t(crop.h) * crop.w);
  for (int r = 0; r < crop.h; ++r) {
    for (int c = 0; c < crop.w; ++c) {
      int sr = src_row(crop, flips, r);
      int sc = src_col(crop, flips, c);
      out.at(r, c) = double(frame.at(sr, sc)) - double(frame.black_level) -
                     shading.at(sr, sc);
    }
  }
  return out;
}

LinearFrame sample_dark(const DarkBank& bank, int iso, const DarkShading& shading,
                        const Crop& crop, const Flips& flips, Rng& rng,
                        const std::string& tag) {
  const auto& frames = bank.group(iso, tag);
  int index = int(rng.uniform_below(frames.size()));
  return dark_patch(bank, iso, shading, index, crop, flips, tag);
}

DarkShading recalibrate_online(const DarkBank& bank, int iso, int n, Rng& rng,
                               const std::string& tag) {
  const auto& frames = bank.group(iso, tag);
  if (n < 1) throw InvariantViolation("subset size must be at least 1");
  if (std::size_t(n) > frames.size())
    throw NTooLarge("subset size exceeds group size");

  // partial Fisher-Yates for an n-subset without replacement
  std::vector<int> indices(frames.size());
  for (std::size_t i = 0; i < frames.size(); ++i) indices[i] = int(i);
  for (int i = 0; i < n; ++i) {
    std::size_t j = i + rng.uniform_below(indices.size() - std::size_t(i));
    std::swap(indices[std::size_t(i)], indices[j]);
  }
  std::vector<int> subset(indices.begin(), indices.begin() + n);
  std::sort(subset.begin(), subset.end());
  return calibrate_shading(bank, iso, subset, tag);
}

void write_dshd(const DarkShading& shading, const SensorProfile& profile,
                const std::filesystem::path& path) {
  detail::ContainerHeader h;
  h.cfa = std::uint8_t(profile.cfa);
  h.bit_depth = std::uint8_t(profile.bit_depth);
  h.black_level = profile.black_level;
  h.white_level = profile.white_level;
  h.iso = std::uint32_t(shading.iso);
  h.analog_gain = 0.0f;
  h.height = std::uint32_t(shading.height);
  h.width = std::uint32_t(shading.width);
  std::vector<float> payload(shading.mean_map.begin(), shading.mean_map.end());
  detail::write_container(path, "DSHD", h, payload.data(),
                          payload.size() * sizeof(float));
}

DarkShading read_dshd(const std::filesystem::path& path) {
  std::vector<std::uint8_t> payload;
  detail::ContainerHeader h = detail::read_container(path, "DSHD", payload);
  std::size_t n = std::size_t(h.height) * h.width;
  if (payload.size() < n * sizeof(float))
    throw TruncatedFile("payload shorter than geometry: " + path.string());
  DarkShading shading;
  shading.height = int(h.height);
  shading.width = int(h.width);
  shading.iso = int(h.iso);
  shading.frame_count = 0;  // not persisted in the container
  std::vector<float> values(n);
  std::memcpy(values.data(), payload.data(), n * sizeof(float));
  shading.mean_map.assign(values.begin(), values.end());
  return shading;
}

}  // namespace rawsynth

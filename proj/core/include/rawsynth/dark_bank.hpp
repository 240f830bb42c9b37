#ifndef RAWSYNTH_DARK_BANK_HPP
#define RAWSYNTH_DARK_BANK_HPP

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "rawsynth/frame.hpp"
#include "rawsynth/rng.hpp"

namespace rawsynth {

/// Even-aligned crop window; (y, x) is the top-left corner.
struct Crop {
  int y = 0;
  int x = 0;
  int h = 0;
  int w = 0;
};

struct Flips {
  bool vertical = false;
  bool horizontal = false;
};

/// Group key for a dark-frame bank: the gain setting, plus an optional tag
/// for capture subsets (e.g. "hot" vs "normal") kept as separate groups.
struct GainKey {
  int iso = 0;
  std::string tag;

  bool operator<(const GainKey& o) const {
    return iso != o.iso ? iso < o.iso : tag < o.tag;
  }
  bool operator==(const GainKey& o) const {
    return iso == o.iso && tag == o.tag;
  }
};

/// Per-gain calibrated dark shading: the temporally consistent per-pixel
/// mean of black-level-subtracted dark frames.
struct DarkShading {
  std::vector<double> mean_map;  // row-major, height*width
  int height = 0;
  int width = 0;
  int iso = 0;
  int frame_count = 0;

  double at(int r, int c) const { return mean_map[std::size_t(r) * width + c]; }
};

/// Dark frames grouped by gain setting; frames keep lexicographic filename
/// order within a group so sampling is index-addressable.
class DarkBank {
 public:
  explicit DarkBank(SensorProfile profile) : profile_(std::move(profile)) {}

  const SensorProfile& profile() const { return profile_; }

  void add_frame(const GainKey& key, RawFrame frame);

  const std::vector<RawFrame>& group(int iso, const std::string& tag = "") const;
  bool has_group(int iso, const std::string& tag = "") const;
  std::vector<GainKey> keys() const;

 private:
  SensorProfile profile_;
  std::map<GainKey, std::vector<RawFrame>> groups_;
};

/// Loads every RAWB file (and raw+JSON-sidecar pair) under dir, grouped by
/// the ISO in the header, filenames sorted lexicographically. Throws
/// EmptyBank / MixedGeometry.
DarkBank load_bank(const std::filesystem::path& dir, const SensorProfile& profile);

/// Per-pixel mean of (pixels - black_level) over the selected frames, fixed
/// index order with Kahan summation so the result is bit-reproducible.
DarkShading calibrate_shading(const DarkBank& bank, int iso,
                              const std::optional<std::vector<int>>& subset = std::nullopt,
                              const std::string& tag = "");

/// Shading-corrected patch of a specific frame with CFA-phase-preserving
/// crop and flips. A flipped axis samples the window shifted by one step so
/// the output keeps the profile's CFA phase; the shifted window must fit.
LinearFrame dark_patch(const DarkBank& bank, int iso, const DarkShading& shading,
                       int frame_index, const Crop& crop, const Flips& flips,
                       const std::string& tag = "");

/// dark_patch of a uniformly random frame from the group.
LinearFrame sample_dark(const DarkBank& bank, int iso, const DarkShading& shading,
                        const Crop& crop, const Flips& flips, Rng& rng,
                        const std::string& tag = "");

/// calibrate_shading over a uniformly sampled n-subset without replacement
/// (few-frame online re-calibration).
DarkShading recalibrate_online(const DarkBank& bank, int iso, int n, Rng& rng,
                               const std::string& tag = "");

/// Applies crop + CFA-phase-preserving flips to a linear frame. Shared by
/// clean-patch extraction and dark sampling so pairs stay aligned.
LinearFrame crop_flip(const LinearFrame& frame, const Crop& crop, const Flips& flips);

/// DSHD persistence (RAWB-variant header, f32 payload).
void write_dshd(const DarkShading& shading, const SensorProfile& profile,
                const std::filesystem::path& path);
DarkShading read_dshd(const std::filesystem::path& path);

}  // namespace rawsynth

#endif  // RAWSYNTH_DARK_BANK_HPP

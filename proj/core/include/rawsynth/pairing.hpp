#ifndef RAWSYNTH_PAIRING_HPP
#define RAWSYNTH_PAIRING_HPP

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "rawsynth/dark_bank.hpp"
#include "rawsynth/frame.hpp"
#include "rawsynth/shot_noise.hpp"

namespace rawsynth {

/// One realized synthesis draw. A recipe fully determines a noisy/clean
/// pair: replaying it reproduces the noisy frame bit-exactly.
struct SynthesisRecipe {
  std::string clean_id;
  GainHypothesis gain;
  int iso = 0;
  int dark_frame_index = 0;
  Crop crop;
  Flips flips;
  std::uint64_t seed = 0;
};

/// Pair-enumeration policy: exhaustive cartesian product or n uniform draws
/// with replacement.
struct PairPolicy {
  enum class Kind { Exhaustive, Random };
  Kind kind = Kind::Exhaustive;
  std::size_t n = 0;  // for Random

  static PairPolicy exhaustive() { return {Kind::Exhaustive, 0}; }
  static PairPolicy random(std::size_t n) { return {Kind::Random, n}; }
};

/// QE selection when enumerating: a fixed hypothesis or a fresh uniform
/// draw per recipe.
struct QePolicy {
  bool jitter = false;
  double fixed_qe = 0.50;
};

/// noisy = quantize(shot_noise(clean patch) + shading-corrected dark patch),
/// clean_patch = same crop/flips of the clean frame. The clean input must be
/// black-level-removed linear.
std::pair<RawFrame, LinearFrame> synthesize_pair(const LinearFrame& clean,
                                                 const SynthesisRecipe& recipe,
                                                 const DarkBank& bank,
                                                 const DarkShading& shading);

/// Enumerates the clean x dark pairing space at one gain setting. Recipe
/// seeds derive from the rng's master seed via splitmix(master, index), so
/// each pair replays independently of batch size or ordering.
std::vector<SynthesisRecipe> enumerate_pairs(const std::vector<std::string>& clean_ids,
                                             const DarkBank& bank, int iso,
                                             const PairPolicy& policy, int patch_h,
                                             int patch_w, Rng& rng,
                                             const QePolicy& qe = {});

/// (pixels - black_level) - mean_map, the network-input correction applied
/// to a noisy capture at inference time.
LinearFrame apply_inference_correction(const RawFrame& noisy, const DarkShading& shading);

/// Recipe JSON persistence, stable key order.
std::string recipe_to_json(const SynthesisRecipe& recipe);
SynthesisRecipe recipe_from_json(const std::string& json_text);

}  // namespace rawsynth

#endif  // RAWSYNTH_PAIRING_HPP

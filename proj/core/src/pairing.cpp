#include "rawsynth/pairing.hpp"

#include <nlohmann/json.hpp>

namespace rawsynth {

std::pair<RawFrame, LinearFrame> synthesize_pair(const LinearFrame& clean,
                                                 const SynthesisRecipe& recipe,
                                                 const DarkBank& bank,
                                                 const DarkShading& shading) {
  LinearFrame clean_patch = crop_flip(clean, recipe.crop, recipe.flips);

  Rng rng(recipe.seed);
  LinearFrame noisy = add_shot_noise(clean_patch, recipe.gain, rng.child(0));
  LinearFrame dark = dark_patch(bank, recipe.iso, shading, recipe.dark_frame_index,
                                recipe.crop, recipe.flips);
  for (std::size_t i = 0; i < noisy.values.size(); ++i)
    noisy.values[i] += dark.values[i];

  noisy.iso = std::uint32_t(recipe.iso);
  noisy.analog_gain = float(recipe.gain.analog_gain);
  noisy.cfa = bank.profile().cfa;
  noisy.bit_depth = bank.profile().bit_depth;
  noisy.black_level = bank.profile().black_level;
  noisy.white_level = bank.profile().white_level;
  return {quantize(noisy), std::move(clean_patch)};
}

namespace {

// Crop/flip draws for one recipe, keyed by the recipe seed so each pair is
// reproducible in isolation.
void draw_augmentation(SynthesisRecipe& recipe, int frame_h, int frame_w,
                       int patch_h, int patch_w) {
  Rng aug = Rng(recipe.seed).child(0xa06);
  recipe.flips.vertical = aug.uniform() < 0.5;
  recipe.flips.horizontal = aug.uniform() < 0.5;
  // a flipped axis needs one spare step for the phase-preserving shift
  int max_y = frame_h - patch_h - (recipe.flips.vertical ? 2 : 0);
  int max_x = frame_w - patch_w - (recipe.flips.horizontal ? 2 : 0);
  if (max_y < 0 || max_x < 0) throw BadCrop("patch larger than frame");
  recipe.crop.y = 2 * int(aug.uniform_below(std::uint64_t(max_y / 2) + 1));
  recipe.crop.x = 2 * int(aug.uniform_below(std::uint64_t(max_x / 2) + 1));
  recipe.crop.h = patch_h;
  recipe.crop.w = patch_w;
}

}  // namespace

std::vector<SynthesisRecipe> enumerate_pairs(const std::vector<std::string>& clean_ids,
                                             const DarkBank& bank, int iso,
                                             const PairPolicy& policy, int patch_h,
                                             int patch_w, Rng& rng,
                                             const QePolicy& qe) {
  if (patch_h <= 0 || patch_w <= 0 || patch_h % 2 || patch_w % 2)
    throw BadCrop("patch dimensions must be positive and even");
  const auto& frames = bank.group(iso);
  const int frame_h = frames.front().height;
  const int frame_w = frames.front().width;
  const std::uint64_t master = rng.seed();

  std::vector<SynthesisRecipe> recipes;
  auto make_recipe = [&](std::size_t index, const std::string& clean_id,
                         int dark_index) {
    SynthesisRecipe r;
    r.clean_id = clean_id;
    r.iso = iso;
    r.dark_frame_index = dark_index;
    r.seed = splitmix(master, index);
    Rng qe_rng = Rng(r.seed).child(0x9e);
    r.gain = hypothesize_k(bank.profile(), iso,
                           qe.jitter ? std::nullopt : std::optional<double>(qe.fixed_qe),
                           qe.jitter ? &qe_rng : nullptr);
    draw_augmentation(r, frame_h, frame_w, patch_h, patch_w);
    return r;
  };

  if (policy.kind == PairPolicy::Kind::Exhaustive) {
    recipes.reserve(clean_ids.size() * frames.size());
    std::size_t index = 0;
    for (const auto& clean_id : clean_ids)
      for (std::size_t f = 0; f < frames.size(); ++f)
        recipes.push_back(make_recipe(index++, clean_id, int(f)));
  } else {
    Rng pick = Rng(master).child(0x71c);
    recipes.reserve(policy.n);
    for (std::size_t i = 0; i < policy.n; ++i) {
      const std::string& clean_id =
          clean_ids[pick.uniform_below(clean_ids.size())];
      int dark_index = int(pick.uniform_below(frames.size()));
      recipes.push_back(make_recipe(i, clean_id, dark_index));
    }
  }
  return recipes;
}

LinearFrame apply_inference_correction(const RawFrame& noisy, const DarkShading& shading) {
  if (noisy.height != shading.height || noisy.width != shading.width)
    throw GeometryMismatch("shading map geometry does not match frame");
  LinearFrame out = to_linear(noisy);
  for (std::size_t i = 0; i < out.values.size(); ++i)
    out.values[i] -= shading.mean_map[i];
  return out;
}

std::string recipe_to_json(const SynthesisRecipe& recipe) {
  nlohmann::ordered_json j;
  j["clean_id"] = recipe.clean_id;
  j["gain"] = {{"analog_gain", recipe.gain.analog_gain},
               {"qe", recipe.gain.qe},
               {"k", recipe.gain.k}};
  j["iso"] = recipe.iso;
  j["dark_frame_index"] = recipe.dark_frame_index;
  j["crop"] = {{"y", recipe.crop.y}, {"x", recipe.crop.x},
               {"h", recipe.crop.h}, {"w", recipe.crop.w}};
  j["flips"] = {{"vertical", recipe.flips.vertical},
                {"horizontal", recipe.flips.horizontal}};
  j["seed"] = recipe.seed;
  return j.dump(2) + "\n";
}

SynthesisRecipe recipe_from_json(const std::string& json_text) {
  nlohmann::json j = nlohmann::json::parse(json_text);
  SynthesisRecipe r;
  r.clean_id = j.at("clean_id").get<std::string>();
  r.gain.analog_gain = j.at("gain").at("analog_gain").get<double>();
  r.gain.qe = j.at("gain").at("qe").get<double>();
  r.gain.k = j.at("gain").at("k").get<double>();
  r.iso = j.at("iso").get<int>();
  r.dark_frame_index = j.at("dark_frame_index").get<int>();
  r.crop.y = j.at("crop").at("y").get<int>();
  r.crop.x = j.at("crop").at("x").get<int>();
  r.crop.h = j.at("crop").at("h").get<int>();
  r.crop.w = j.at("crop").at("w").get<int>();
  r.flips.vertical = j.at("flips").at("vertical").get<bool>();
  r.flips.horizontal = j.at("flips").at("horizontal").get<bool>();
  r.seed = j.at("seed").get<std::uint64_t>();
  return r;
}

}  // namespace rawsynth

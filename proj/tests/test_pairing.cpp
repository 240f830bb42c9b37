#include <doctest.h>

#include <cmath>
#include <map>
#include <set>

#include "rawsynth/pairing.hpp"
#include "test_util.hpp"

using namespace rawsynth;
using namespace rawsynth::test;

namespace {

// bank whose dark frames are exact quantizations of the shading (all noise
// sources vanish after correction)
DarkBank perfect_bank(int n, int h, int w) {
  SensorProfile p = test_profile();
  DarkBank bank(p);
  RawFrame f = constant_frame(h, w, 0);
  Rng rng(101);
  for (auto& px : f.pixels) px = std::uint16_t(500 + rng.uniform_below(25));
  for (int i = 0; i < n; ++i) bank.add_frame({6400, ""}, f);
  return bank;
}

DarkBank zero_bank(int n, int h, int w) {
  SensorProfile p = test_profile();
  DarkBank bank(p);
  for (int i = 0; i < n; ++i)
    bank.add_frame({6400, ""}, constant_frame(h, w, p.black_level));
  return bank;
}

SynthesisRecipe basic_recipe(int h, int w, double k, std::uint64_t seed) {
  SynthesisRecipe r;
  r.clean_id = "c0";
  r.gain = GainHypothesis{16.0, k / 16.0, k};
  r.iso = 6400;
  r.dark_frame_index = 0;
  r.crop = Crop{0, 0, h, w};
  r.flips = Flips{};
  r.seed = seed;
  return r;
}

}  // namespace

TEST_CASE("perfect dark frames and zero clean give pure black level") {
  DarkBank bank = perfect_bank(1, 8, 8);
  DarkShading s = calibrate_shading(bank, 6400);
  LinearFrame clean = constant_linear(8, 8, 0.0);
  auto [noisy, patch] = synthesize_pair(clean, basic_recipe(8, 8, 8.0, 7), bank, s);
  for (auto px : noisy.pixels) CHECK(px == 512);
  for (double v : patch.values) CHECK(v == 0.0);
}

TEST_CASE("zero-dark synthesis reproduces shot-noise moments after de-quantization") {
  DarkBank bank = zero_bank(1, 512, 512);
  DarkShading s = calibrate_shading(bank, 6400);
  LinearFrame clean = constant_linear(512, 512, 1000.0);

  double sum = 0, sum2 = 0;
  std::size_t n = 0;
  for (std::uint64_t seed = 0; seed < 4; ++seed) {
    auto [noisy, patch] =
        synthesize_pair(clean, basic_recipe(512, 512, 8.74, 1000 + seed), bank, s);
    LinearFrame lin = to_linear(noisy);
    for (double v : lin.values) {
      sum += v;
      sum2 += v * v;
      ++n;
    }
  }
  double mean = sum / double(n);
  double var = sum2 / double(n) - mean * mean;
  CHECK(mean == doctest::Approx(1000.0).epsilon(0.01));
  CHECK(var == doctest::Approx(8740.0).epsilon(0.025));
}

TEST_CASE("exhaustive pairing enumerates the cartesian product") {
  SensorProfile p = test_profile();
  Rng rng(30);
  DarkBank bank10 = synthetic_bank(rng, 10, 16, 16, 2.0);
  std::vector<std::string> ten;
  for (int i = 0; i < 10; ++i) ten.push_back("clean" + std::to_string(i));
  Rng master(40);
  auto recipes = enumerate_pairs(ten, bank10, 6400, PairPolicy::exhaustive(), 8, 8, master);
  CHECK(recipes.size() == 100);
  std::set<std::pair<std::string, int>> combos;
  for (const auto& r : recipes) combos.insert({r.clean_id, r.dark_frame_index});
  CHECK(combos.size() == 100);

  DarkBank bank5 = synthetic_bank(rng, 5, 16, 16, 2.0);
  Rng master2(41);
  auto r35 = enumerate_pairs({"a", "b", "c"}, bank5, 6400, PairPolicy::exhaustive(),
                             8, 8, master2);
  CHECK(r35.size() == 15);
}

TEST_CASE("random pairing policies") {
  SensorProfile p = test_profile();
  Rng rng(31);
  DarkBank bank = synthetic_bank(rng, 10, 16, 16, 2.0);
  std::vector<std::string> ten;
  for (int i = 0; i < 10; ++i) ten.push_back("c" + std::to_string(i));

  Rng m0(50);
  CHECK(enumerate_pairs(ten, bank, 6400, PairPolicy::random(0), 8, 8, m0).empty());

  Rng m1(51);
  auto recipes = enumerate_pairs(ten, bank, 6400, PairPolicy::random(10000), 8, 8, m1);
  REQUIRE(recipes.size() == 10000);
  std::map<std::pair<std::string, int>, int> counts;
  for (const auto& r : recipes) ++counts[{r.clean_id, r.dark_frame_index}];
  for (const auto& [cell, count] : counts) {
    CHECK(count >= 60);   // 100 +- 40 (4 sigma multinomial)
    CHECK(count <= 140);
  }
}

TEST_CASE("replaying a recipe is bit-exact, including through JSON") {
  SensorProfile p = test_profile();
  Rng rng(32);
  DarkBank bank = synthetic_bank(rng, 5, 16, 16, 2.5);
  DarkShading s = calibrate_shading(bank, 6400);
  LinearFrame clean = constant_linear(16, 16, 800.0);

  Rng master(60);
  auto recipes = enumerate_pairs({"c0"}, bank, 6400, PairPolicy::exhaustive(), 8, 8,
                                 master, QePolicy{true, 0.5});
  for (const auto& r : recipes) {
    auto [n1, c1] = synthesize_pair(clean, r, bank, s);
    SynthesisRecipe replayed = recipe_from_json(recipe_to_json(r));
    auto [n2, c2] = synthesize_pair(clean, replayed, bank, s);
    REQUIRE(n1.pixels == n2.pixels);
    REQUIRE(c1.values == c2.values);
  }
}

TEST_CASE("clean patch and dark sample share crop and flips") {
  SensorProfile p = test_profile();
  DarkBank bank(p);
  // delta marker in the dark frame, far above the noise
  RawFrame dark = constant_frame(16, 16, p.black_level);
  dark.at(4, 6) = std::uint16_t(p.black_level + 2000);
  bank.add_frame({6400, ""}, dark);
  DarkShading zero_shading;
  zero_shading.height = 16;
  zero_shading.width = 16;
  zero_shading.iso = 6400;
  zero_shading.frame_count = 1;
  zero_shading.mean_map.assign(256, 0.0);

  LinearFrame clean = constant_linear(16, 16, 0.0);
  SynthesisRecipe r = basic_recipe(8, 8, 8.0, 70);
  r.crop = Crop{2, 2, 8, 8};
  r.flips = Flips{true, true};

  auto [noisy, patch] = synthesize_pair(clean, r, bank, zero_shading);
  // locate the marker: clean is zero, so shot noise is zero and the only
  // bright pixel is the dark frame's delta through the same crop/flips
  int found_r = -1, found_c = -1;
  for (int rr = 0; rr < 8; ++rr)
    for (int cc = 0; cc < 8; ++cc)
      if (noisy.at(rr, cc) > 1000) {
        found_r = rr;
        found_c = cc;
      }
  // flip maps source (4,6) with crop (2,2,8,8): r = y+h-src = 2+8-4 = 6
  CHECK(found_r == 6);
  CHECK(found_c == 4);
}

TEST_CASE("inference correction subtracts black level and shading") {
  SensorProfile p = test_profile();
  Rng rng(33);
  DarkBank bank = synthetic_bank(rng, 4, 8, 8, 2.0);
  DarkShading s = calibrate_shading(bank, 6400);

  // noisy = quantize(shading + black) recovers within quantization error
  LinearFrame lin = constant_linear(8, 8, 0.0);
  for (std::size_t i = 0; i < lin.values.size(); ++i) lin.values[i] = s.mean_map[i];
  RawFrame noisy = quantize(lin);
  LinearFrame corrected = apply_inference_correction(noisy, s);
  for (double v : corrected.values) CHECK(std::fabs(v) <= 0.5);

  // zero shading equals to_linear
  DarkShading zero = s;
  std::fill(zero.mean_map.begin(), zero.mean_map.end(), 0.0);
  LinearFrame plain = apply_inference_correction(noisy, zero);
  LinearFrame direct = to_linear(noisy);
  CHECK(plain.values == direct.values);

  DarkShading wrong = s;
  wrong.height = 4;
  CHECK_THROWS_AS(apply_inference_correction(noisy, wrong), GeometryMismatch);
}

TEST_CASE("correction recovers the signal under a capture carrying shading") {
  DarkBank bank = perfect_bank(1, 16, 16);
  DarkShading s = calibrate_shading(bank, 6400);
  LinearFrame clean = constant_linear(16, 16, 500.0);
  SynthesisRecipe r = basic_recipe(16, 16, 4.0, 90);

  // a real capture contains the shading; build one from the shot-noise
  // realization plus the calibrated map (integer-valued here, so exact)
  LinearFrame shot = add_shot_noise(clean, r.gain, Rng(r.seed).child(0));
  LinearFrame capture = shot;
  for (std::size_t i = 0; i < capture.values.size(); ++i)
    capture.values[i] += s.mean_map[i];
  LinearFrame corrected = apply_inference_correction(quantize(capture), s);
  for (std::size_t i = 0; i < corrected.values.size(); ++i)
    CHECK(std::fabs(corrected.values[i] - shot.values[i]) <= 0.5);
}

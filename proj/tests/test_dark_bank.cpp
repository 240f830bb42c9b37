#include <doctest.h>

#include <cmath>

#include "rawsynth/io.hpp"
#include "test_util.hpp"

using namespace rawsynth;
using namespace rawsynth::test;

TEST_CASE("load_bank groups by iso in filename order") {
  TempDir dir("bank_load");
  SensorProfile p = test_profile();
  Rng rng(3);
  for (int iso : {1600, 6400}) {
    for (int i = 0; i < 3; ++i) {
      char name[32];
      std::snprintf(name, sizeof(name), "d_%05d_%02d.rawb", iso, i);
      RawFrame f = noisy_dark_frame(rng, 8, 8, 2.0, {}, p, std::uint32_t(iso));
      f.pixels[0] = std::uint16_t(i);  // marks filename order
      write_rawb(f, dir.path() / name);
    }
  }
  DarkBank bank = load_bank(dir.path(), p);
  CHECK(bank.keys().size() == 2);
  CHECK(bank.group(1600).size() == 3);
  CHECK(bank.group(6400).size() == 3);
  for (int i = 0; i < 3; ++i) CHECK(bank.group(6400)[std::size_t(i)].pixels[0] == i);
  CHECK_THROWS_AS(bank.group(100), UnknownGain);
}

TEST_CASE("load_bank rejects empty dirs and mixed geometry") {
  SensorProfile p = test_profile();
  TempDir empty("bank_empty");
  CHECK_THROWS_AS(load_bank(empty.path(), p), EmptyBank);

  TempDir mixed("bank_mixed");
  Rng rng(4);
  write_rawb(noisy_dark_frame(rng, 8, 8, 1.0, {}, p), mixed.path() / "a.rawb");
  write_rawb(noisy_dark_frame(rng, 6, 8, 1.0, {}, p), mixed.path() / "b.rawb");
  CHECK_THROWS_AS(load_bank(mixed.path(), p), MixedGeometry);
}

TEST_CASE("shading of a symmetric pair is zero") {
  SensorProfile p = test_profile();
  DarkBank bank(p);
  bank.add_frame({6400, ""}, constant_frame(4, 4, 510));
  bank.add_frame({6400, ""}, constant_frame(4, 4, 514));
  DarkShading s = calibrate_shading(bank, 6400);
  CHECK(s.frame_count == 2);
  for (double v : s.mean_map) CHECK(v == 0.0);
}

TEST_CASE("single-frame subset reproduces the frame") {
  SensorProfile p = test_profile();
  Rng rng(8);
  DarkBank bank = synthetic_bank(rng, 3, 6, 6, 4.0);
  DarkShading s = calibrate_shading(bank, 6400, std::vector<int>{0});
  const RawFrame& f = bank.group(6400)[0];
  for (std::size_t i = 0; i < s.mean_map.size(); ++i)
    CHECK(s.mean_map[i] == double(f.pixels[i]) - 512.0);
  CHECK_THROWS_AS(calibrate_shading(bank, 6400, std::vector<int>{}), EmptySubset);
}

TEST_CASE("shading estimate converges to the true pattern") {
  SensorProfile p = test_profile();
  const int h = 32, w = 32;
  std::vector<double> pattern(h * w);
  Rng prng(55);
  for (auto& v : pattern) v = 10.0 * prng.uniform();
  Rng rng(56);
  DarkBank bank = synthetic_bank(rng, 180, h, w, 5.0, pattern);
  DarkShading s = calibrate_shading(bank, 6400);
  // quantization adds ~1/12 DN^2; keep the CLT bound with slack for it
  double bound = 5.0 * 4.0 / std::sqrt(180.0) + 0.5;
  double worst = 0;
  for (std::size_t i = 0; i < s.mean_map.size(); ++i)
    worst = std::max(worst, std::fabs(s.mean_map[i] - pattern[i]));
  CHECK(worst < bound);
}

TEST_CASE("mean residual over all frames is exactly zero (power-of-two group)") {
  SensorProfile p = test_profile();
  DarkBank bank(p);
  Rng rng(12);
  for (int i = 0; i < 4; ++i) {
    RawFrame f = constant_frame(4, 4, 0);
    for (auto& px : f.pixels) px = std::uint16_t(500 + rng.uniform_below(30));
    bank.add_frame({6400, ""}, f);
  }
  DarkShading s = calibrate_shading(bank, 6400);
  const auto& frames = bank.group(6400);
  for (std::size_t i = 0; i < s.mean_map.size(); ++i) {
    double sum = 0;
    for (const auto& f : frames) sum += double(f.pixels[i]) - 512.0 - s.mean_map[i];
    CHECK(sum == 0.0);
  }
}

TEST_CASE("shading is bit-reproducible") {
  SensorProfile p = test_profile();
  Rng rng(13);
  DarkBank bank = synthetic_bank(rng, 50, 8, 8, 3.0);
  DarkShading a = calibrate_shading(bank, 6400);
  DarkShading b = calibrate_shading(bank, 6400);
  CHECK(a.mean_map == b.mean_map);
}

TEST_CASE("perfect dark frame corrects to zero") {
  SensorProfile p = test_profile();
  DarkBank bank(p);
  RawFrame f = constant_frame(6, 6, 0);
  Rng rng(14);
  for (auto& px : f.pixels) px = std::uint16_t(505 + rng.uniform_below(20));
  bank.add_frame({6400, ""}, f);
  DarkShading s = calibrate_shading(bank, 6400);

  Rng srng(15);
  LinearFrame out = sample_dark(bank, 6400, s, Crop{0, 0, 6, 6}, Flips{}, srng);
  for (double v : out.values) CHECK(v == 0.0);
}

TEST_CASE("sampled residual moments match the generator") {
  SensorProfile p = test_profile();
  Rng rng(16);
  DarkBank bank = synthetic_bank(rng, 64, 32, 32, 3.0);
  DarkShading s = calibrate_shading(bank, 6400);
  Rng srng(17);
  double sum = 0, sum2 = 0;
  std::size_t n = 0;
  for (int i = 0; i < 100; ++i) {
    LinearFrame out = sample_dark(bank, 6400, s, Crop{4, 4, 16, 16}, Flips{}, srng);
    for (double v : out.values) {
      sum += v;
      sum2 += v * v;
      ++n;
    }
  }
  double mean = sum / double(n);
  double stdev = std::sqrt(sum2 / double(n) - mean * mean);
  CHECK(std::fabs(mean) < 0.1);
  CHECK(stdev == doctest::Approx(3.0).epsilon(0.04));
}

TEST_CASE("crop and flips preserve CFA phase") {
  SensorProfile p = test_profile();
  // encode the CFA color in each pixel value
  LinearFrame f = constant_linear(16, 16, 0.0);
  for (int r = 0; r < 16; ++r)
    for (int c = 0; c < 16; ++c) f.at(r, c) = double(cfa_color_at(p.cfa, r, c));

  Rng rng(18);
  for (int trial = 0; trial < 200; ++trial) {
    Flips flips{rng.uniform() < 0.5, rng.uniform() < 0.5};
    int h = 4 + 2 * int(rng.uniform_below(4));
    int w = 4 + 2 * int(rng.uniform_below(4));
    int max_y = 16 - h - (flips.vertical ? 2 : 0);
    int max_x = 16 - w - (flips.horizontal ? 2 : 0);
    Crop crop{2 * int(rng.uniform_below(std::uint64_t(max_y / 2) + 1)),
              2 * int(rng.uniform_below(std::uint64_t(max_x / 2) + 1)), h, w};
    LinearFrame patch = crop_flip(f, crop, flips);
    for (int r = 0; r < h; ++r)
      for (int c = 0; c < w; ++c)
        REQUIRE(patch.at(r, c) == double(cfa_color_at(p.cfa, r, c)));
  }
}

TEST_CASE("crops must be even-aligned and in bounds") {
  LinearFrame f = constant_linear(8, 8, 0.0);
  CHECK_THROWS_AS(crop_flip(f, Crop{1, 0, 4, 4}, Flips{}), BadCrop);
  CHECK_THROWS_AS(crop_flip(f, Crop{0, 0, 3, 4}, Flips{}), BadCrop);
  CHECK_THROWS_AS(crop_flip(f, Crop{0, 6, 4, 4}, Flips{}), BadCrop);
  // full-width crop cannot host a horizontal flip's phase shift
  CHECK_THROWS_AS(crop_flip(f, Crop{0, 0, 8, 8}, Flips{false, true}), BadCrop);
  CHECK_NOTHROW(crop_flip(f, Crop{0, 0, 8, 6}, Flips{false, true}));
}

TEST_CASE("online recalibration matches full calibration at n = group size") {
  SensorProfile p = test_profile();
  Rng rng(19);
  DarkBank bank = synthetic_bank(rng, 20, 8, 8, 3.0);
  Rng r1(20);
  DarkShading full = calibrate_shading(bank, 6400);
  DarkShading sub = recalibrate_online(bank, 6400, 20, r1);
  CHECK(sub.mean_map == full.mean_map);

  Rng r2(21);
  DarkShading one = recalibrate_online(bank, 6400, 1, r2);
  CHECK(one.frame_count == 1);
  CHECK_THROWS_AS(recalibrate_online(bank, 6400, 21, r2), NTooLarge);
  CHECK_THROWS_AS(recalibrate_online(bank, 6400, 0, r2), InvariantViolation);
}

TEST_CASE("recalibration error follows sigma over sqrt n") {
  SensorProfile p = test_profile();
  const int h = 32, w = 32;
  const double sigma = 5.0;
  std::vector<double> pattern(h * w, 0.0);
  Rng rng(22);
  DarkBank bank = synthetic_bank(rng, 200, h, w, sigma, pattern);

  auto rms_for = [&](int n, std::uint64_t seed) {
    double acc = 0;
    int reps = 20;
    for (int rep = 0; rep < reps; ++rep) {
      Rng r(seed + std::uint64_t(rep));
      DarkShading s = recalibrate_online(bank, 6400, n, r);
      double sq = 0;
      for (double v : s.mean_map) sq += v * v;
      acc += std::sqrt(sq / double(s.mean_map.size()));
    }
    return acc / double(reps);
  };

  // quantization adds var 1/12 to each frame
  double eff_sigma = std::sqrt(sigma * sigma + 1.0 / 12.0);
  double rms10 = rms_for(10, 500);
  CHECK(rms10 == doctest::Approx(eff_sigma / std::sqrt(10.0)).epsilon(0.20));

  // monotone in n with shared bank
  double rms1 = rms_for(1, 600);
  double rms100 = rms_for(100, 700);
  CHECK(rms1 > rms10);
  CHECK(rms10 > rms100);
}

TEST_CASE("dshd files round trip to float precision") {
  TempDir dir("dshd");
  SensorProfile p = test_profile();
  Rng rng(23);
  DarkBank bank = synthetic_bank(rng, 5, 8, 8, 2.0);
  DarkShading s = calibrate_shading(bank, 6400);
  auto path = dir.path() / "s.dshd";
  write_dshd(s, p, path);
  DarkShading t = read_dshd(path);
  CHECK(t.height == s.height);
  CHECK(t.iso == 6400);
  for (std::size_t i = 0; i < s.mean_map.size(); ++i)
    CHECK(t.mean_map[i] == doctest::Approx(s.mean_map[i]).epsilon(1e-6));
}

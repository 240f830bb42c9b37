#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "rawsynth/hbnr.hpp"
#include "test_util.hpp"

using namespace rawsynth;
using namespace rawsynth::test;

namespace {

std::vector<double> laplace_samples(std::size_t n, double b, Rng& rng) {
  std::vector<double> out(n);
  for (auto& v : out) {
    double u = rng.uniform_open() - 0.5;
    v = -b * std::copysign(std::log(1.0 - 2.0 * std::fabs(u)), u);
  }
  return out;
}

double ks_against_model(const std::vector<double>& samples, const HbnrModel& model) {
  std::vector<double> sorted = samples;
  std::sort(sorted.begin(), sorted.end());
  const double n = double(sorted.size());
  double d = 0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    double f = model.cdf(sorted[i]);
    d = std::max(d, std::fabs(f - double(i) / n));
    d = std::max(d, std::fabs(f - double(i + 1) / n));
  }
  return d;
}

}  // namespace

TEST_CASE("family selection picks the generator's family") {
  Rng rng(400);
  std::vector<LinearFrame> gaussian_frames;
  {
    LinearFrame f = constant_linear(512, 512, 0.0);
    for (auto& v : f.values) v = 2.0 * rng.gaussian();
    gaussian_frames.push_back(f);
    gaussian_frames.push_back(f);
    for (auto& v : gaussian_frames[1].values) v = 2.0 * rng.gaussian();
  }
  HbnrModel g = fit_hbnr(gaussian_frames);
  CHECK(g.family == HbnrFamily::Gaussian);
  CHECK(g.scale == doctest::Approx(2.0).epsilon(0.02));

  std::vector<LinearFrame> uniform_frames;
  {
    LinearFrame f = constant_linear(512, 512, 0.0);
    for (auto& v : f.values) v = 4.0 * rng.uniform() - 2.0;
    uniform_frames.push_back(f);
  }
  HbnrModel u = fit_hbnr(uniform_frames);
  CHECK(u.family == HbnrFamily::Uniform);
  CHECK(u.scale == doctest::Approx(2.0).epsilon(0.02));
}

TEST_CASE("constant frames are degenerate") {
  std::vector<LinearFrame> frames{constant_linear(8, 8, 1.0)};
  CHECK_THROWS_AS(fit_hbnr(frames), DegenerateSamples);
}

TEST_CASE("expansion stays in the source bin and re-quantizes exactly") {
  SensorProfile p = test_profile();
  HbnrModel model;
  model.family = HbnrFamily::Gaussian;
  model.location = 0.0;
  model.scale = 2.0;

  Rng rng(401);
  for (int trial = 0; trial < 100; ++trial) {
    DarkBank bank = synthetic_bank(rng, 3, 8, 8, 2.0);
    DarkShading s = calibrate_shading(bank, 6400);
    const RawFrame& f = bank.group(6400)[std::size_t(rng.uniform_below(3))];
    LinearFrame expanded = expand_bit_depth(f, s, model, rng.child(trial));

    // bin membership in shading-corrected space
    for (std::size_t i = 0; i < expanded.values.size(); ++i) {
      double x0 = double(f.pixels[i]) - 512.0 - s.mean_map[i];
      double y = expanded.values[i] - s.mean_map[i];
      REQUIRE(y > x0 - 0.5);
      REQUIRE(y < x0 + 0.5);
    }
    RawFrame requantized = quantize(expanded);
    REQUIRE(requantized.pixels == f.pixels);
  }
}

TEST_CASE("correctly specified expansion matches the model distribution") {
  SensorProfile p = test_profile();
  const double sigma = 4.0;
  Rng rng(402);
  DarkBank bank = synthetic_bank(rng, 16, 256, 256, sigma);
  DarkShading zero;
  zero.height = 256;
  zero.width = 256;
  zero.iso = 6400;
  zero.mean_map.assign(256 * 256, 0.0);

  // pooled corrected samples for the fit
  std::vector<double> pooled;
  for (const auto& f : bank.group(6400))
    for (auto px : f.pixels) pooled.push_back(double(px) - 512.0);
  HbnrModel model = fit_hbnr_family(pooled, HbnrFamily::Gaussian);

  std::vector<double> expanded;
  for (std::size_t i = 0; i < bank.group(6400).size(); ++i) {
    LinearFrame e = expand_bit_depth(bank.group(6400)[i], zero, model, rng.child(1000 + i));
    expanded.insert(expanded.end(), e.values.begin(), e.values.end());
  }
  CHECK(expanded.size() >= 1000000);
  CHECK(ks_against_model(expanded, model) < 0.005);
}

TEST_CASE("misspecified expansion deviates measurably") {
  SensorProfile p = test_profile();
  Rng rng(403);
  const double b = 2.0;  // laplace scale
  auto noise = laplace_samples(512 * 512 * 4, b, rng);

  DarkBank bank(p);
  for (int i = 0; i < 4; ++i) {
    LinearFrame lin = constant_linear(512, 512, 0.0);
    for (std::size_t j = 0; j < lin.values.size(); ++j)
      lin.values[j] = noise[std::size_t(i) * lin.values.size() + j];
    bank.add_frame({6400, ""}, quantize(lin));
  }
  DarkShading zero;
  zero.height = 512;
  zero.width = 512;
  zero.iso = 6400;
  zero.mean_map.assign(512 * 512, 0.0);

  std::vector<double> pooled;
  for (const auto& f : bank.group(6400))
    for (auto px : f.pixels) pooled.push_back(double(px) - 512.0);
  HbnrModel gaussian = fit_hbnr_family(pooled, HbnrFamily::Gaussian);

  std::vector<double> expanded;
  for (std::size_t i = 0; i < 4; ++i) {
    LinearFrame e =
        expand_bit_depth(bank.group(6400)[i], zero, gaussian, rng.child(2000 + i));
    expanded.insert(expanded.end(), e.values.begin(), e.values.end());
  }
  CHECK(ks_against_model(expanded, gaussian) > 0.02);
}

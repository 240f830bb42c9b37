#include "rawsynth/shot_noise.hpp"

#include <cmath>

namespace rawsynth {

GainHypothesis hypothesize_k(const SensorProfile& profile, int iso,
                             std::optional<double> qe_override, Rng* rng) {
  profile.validate();
  if (iso <= 0) throw InvariantViolation("iso must be positive");

  GainHypothesis g;
  g.analog_gain = double(iso) / double(profile.base_iso);
  if (qe_override) {
    if (*qe_override < profile.qe_lo || *qe_override > profile.qe_hi)
      throw QeOutOfRange("qe override outside [" + std::to_string(profile.qe_lo) +
                         ", " + std::to_string(profile.qe_hi) + "]");
    g.qe = *qe_override;
  } else if (rng) {
    g.qe = profile.qe_lo + rng->uniform() * (profile.qe_hi - profile.qe_lo);
  } else {
    g.qe = profile.qe_hypothesis;
  }
  g.k = g.qe * g.analog_gain;
  return g;
}

namespace {

// Hoermann's PTRS transformed-rejection sampler, valid for lambda >= 10.
std::uint64_t poisson_ptrs(double lambda, Rng& rng) {
  const double slam = std::sqrt(lambda);
  const double loglam = std::log(lambda);
  const double b = 0.931 + 2.53 * slam;
  const double a = -0.059 + 0.02483 * b;
  const double inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
  const double v_r = 0.9277 - 3.6224 / (b - 2.0);

  for (;;) {
    double u = rng.uniform() - 0.5;
    double v = rng.uniform();
    double us = 0.5 - std::fabs(u);
    double kf = std::floor((2.0 * a / us + b) * u + lambda + 0.43);
    if (us >= 0.07 && v <= v_r) return std::uint64_t(kf);
    if (kf < 0 || (us < 0.013 && v > us)) continue;
    if (std::log(v) + std::log(inv_alpha) - std::log(a / (us * us) + b) <=
        kf * loglam - lambda - std::lgamma(kf + 1.0))
      return std::uint64_t(kf);
  }
}

// CDF inversion by sequential search; adequate below lambda = 10.
std::uint64_t poisson_inversion(double lambda, Rng& rng) {
  double p = std::exp(-lambda);
  double cum = p;
  double u = rng.uniform();
  std::uint64_t k = 0;
  while (u > cum) {
    ++k;
    p *= lambda / double(k);
    cum += p;
    if (k > 1000) break;  // u in the far numerical tail
  }
  return k;
}

}  // namespace

std::uint64_t poisson_sample(double lambda, Rng& rng) {
  if (!(lambda >= 0.0) || !std::isfinite(lambda))
    throw InvalidLambda("lambda must be finite and nonnegative");
  if (lambda == 0.0) return 0;
  return lambda < 10.0 ? poisson_inversion(lambda, rng) : poisson_ptrs(lambda, rng);
}

LinearFrame add_shot_noise(const LinearFrame& clean, const GainHypothesis& gain,
                           const Rng& rng) {
  if (!(gain.k > 0.0)) throw NonPositiveGain("system gain must be positive");

  LinearFrame out = clean;
  const double k = gain.k;
  const std::uint64_t seed = rng.seed();
  for (std::size_t i = 0; i < out.values.size(); ++i) {
    double expected = clean.values[i] > 0.0 ? clean.values[i] : 0.0;
    Rng pixel_rng(splitmix(seed, i));
    out.values[i] = k * double(poisson_sample(expected / k, pixel_rng));
  }
  return out;
}

}  // namespace rawsynth

#ifndef RAWSYNTH_SHOT_NOISE_HPP
#define RAWSYNTH_SHOT_NOISE_HPP

#include <cstdint>
#include <optional>

#include "rawsynth/frame.hpp"
#include "rawsynth/rng.hpp"

namespace rawsynth {

/// A hypothesized system gain: DN per photoelectron-equivalent,
/// k = qe * analog_gain.
struct GainHypothesis {
  double analog_gain = 1.0;
  double qe = 0.5;
  double k = 0.5;
};

/// Builds a gain hypothesis for the given ISO. With no override and no rng
/// the profile's qe_hypothesis is used; with an rng, qe is drawn uniformly
/// from [qe_lo, qe_hi]. Throws QeOutOfRange if an override escapes the
/// profile's band.
GainHypothesis hypothesize_k(const SensorProfile& profile, int iso,
                             std::optional<double> qe_override = std::nullopt,
                             Rng* rng = nullptr);

/// Exact Poisson draw. Inversion by CDF below lambda = 10, transformed
/// rejection (PTRS) above. Throws InvalidLambda on negative or non-finite
/// input.
std::uint64_t poisson_sample(double lambda, Rng& rng);

/// Per-pixel scaled-Poisson shot noise: out = k * Poisson(max(I, 0) / k).
/// The RNG is counter-indexed by pixel, so the result is independent of
/// traversal order. Output stays real-valued; quantization is the caller's
/// job. Throws NonPositiveGain if k <= 0.
LinearFrame add_shot_noise(const LinearFrame& clean, const GainHypothesis& gain,
                           const Rng& rng);

}  // namespace rawsynth

#endif  // RAWSYNTH_SHOT_NOISE_HPP

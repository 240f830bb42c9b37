#ifndef RAWSYNTH_HBNR_HPP
#define RAWSYNTH_HBNR_HPP

#include <string>
#include <vector>

#include "rawsynth/dark_bank.hpp"
#include "rawsynth/frame.hpp"
#include "rawsynth/profiling.hpp"
#include "rawsynth/rng.hpp"

namespace rawsynth {

enum class HbnrFamily { Gaussian, Uniform, TukeyLambda };

const char* hbnr_family_name(HbnrFamily family);

/// A simple signal-independent noise model used to expand quantized dark
/// frames back to real values inside their quantization bins.
struct HbnrModel {
  HbnrFamily family = HbnrFamily::Gaussian;
  double location = 0.0;
  double scale = 1.0;
  double shape = 0.0;           // Tukey-Lambda only
  double selection_score = 0.0; // negative log-likelihood on fit data

  double cdf(double x) const;
  double ppf(double p) const;
};

/// Fits Gaussian, Uniform, and Tukey-Lambda by maximum likelihood on the
/// pooled shading-corrected samples and returns the family with lowest
/// negative log-likelihood.
HbnrModel fit_hbnr(const std::vector<LinearFrame>& frames);

/// Fits only the given family (for forced-family CLI mode and tests).
HbnrModel fit_hbnr_family(const std::vector<double>& samples, HbnrFamily family);

/// Percent-point-function perturbation: each pixel's expanded value is a
/// model-consistent real draw inside the pixel's quantization bin, so
/// re-quantizing reproduces the input exactly. The RNG is counter-indexed
/// per pixel.
LinearFrame expand_bit_depth(const RawFrame& frame, const DarkShading& shading,
                             const HbnrModel& model, const Rng& rng);

}  // namespace rawsynth

#endif  // RAWSYNTH_HBNR_HPP

#ifndef RAWSYNTH_PTC_HPP
#define RAWSYNTH_PTC_HPP

#include <utility>
#include <vector>

#include "rawsynth/frame.hpp"

namespace rawsynth {

/// Photon-transfer-curve fit: variance vs mean over flat-field levels.
/// k_hat is the slope (DN per photoelectron), read_var the intercept.
struct PtcFit {
  double k_hat = 0.0;
  double read_var = 0.0;
  double r2 = 0.0;
  std::vector<std::pair<double, double>> points;  // (mean DN, variance DN^2)
};

struct KComparison {
  double implied_qe = 0.0;
  bool in_band = false;
};

/// Frame-difference PTC over pairs of flats at varied illumination. Per
/// level, the mean is the spatial mean of (a+b)/2 and the variance the
/// spatial variance of (a-b)/sqrt(2), both over a central ROI (middle 25%
/// area), which cancels fixed-pattern noise. Throws TooFewLevels,
/// SaturatedRoi, DegenerateFit.
PtcFit ptc_from_flatfields(const std::vector<std::pair<LinearFrame, LinearFrame>>& pairs);

/// OLS of variance on mean over precomputed (mean, variance) points.
PtcFit ptc_fit_points(std::vector<std::pair<double, double>> points);

/// implied_qe = k_hat / (iso / base_iso), flagged against the profile's QE
/// band.
KComparison compare_k(const SensorProfile& profile, int iso, const PtcFit& ptc);

}  // namespace rawsynth

#endif  // RAWSYNTH_PTC_HPP

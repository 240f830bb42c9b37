#include "rawsynth/ptc.hpp"

#include <cmath>

namespace rawsynth {

namespace {

struct RoiStats {
  double mean;
  double diff_var;
};

// Central ROI (middle 25% area): mean of (a+b)/2, spatial variance of
// (a-b)/sqrt(2). The frame difference cancels PRNU and fixed-pattern noise.
RoiStats roi_stats(const LinearFrame& a, const LinearFrame& b) {
  if (a.height != b.height || a.width != b.width)
    throw GeometryMismatch("flat-field pair geometry mismatch");
  const int y0 = a.height / 4, y1 = a.height - a.height / 4;
  const int x0 = a.width / 4, x1 = a.width - a.width / 4;
  const double n = double(y1 - y0) * double(x1 - x0);

  double sum = 0.0, dsum = 0.0, dsum2 = 0.0;
  for (int r = y0; r < y1; ++r) {
    for (int c = x0; c < x1; ++c) {
      double av = a.at(r, c), bv = b.at(r, c);
      sum += 0.5 * (av + bv);
      double d = (av - bv) * 0.7071067811865475244;
      dsum += d;
      dsum2 += d * d;
    }
  }
  double dmean = dsum / n;
  return {sum / n, (dsum2 / n - dmean * dmean) * n / (n - 1.0)};
}

}  // namespace

PtcFit ptc_from_flatfields(const std::vector<std::pair<LinearFrame, LinearFrame>>& pairs) {
  if (pairs.size() < 2) throw TooFewLevels("PTC needs at least 2 illumination levels");

  std::vector<std::pair<double, double>> points;
  for (const auto& [a, b] : pairs) {
    RoiStats s = roi_stats(a, b);
    double headroom = double(a.white_level) - double(a.black_level);
    if (s.mean > 0.9 * headroom)
      throw SaturatedRoi("flat-field ROI mean above 90% of full scale");
    points.emplace_back(s.mean, s.diff_var);
  }
  return ptc_fit_points(std::move(points));
}

PtcFit ptc_fit_points(std::vector<std::pair<double, double>> points) {
  if (points.size() < 2) throw TooFewLevels("PTC needs at least 2 illumination levels");
  PtcFit fit;
  fit.points = std::move(points);

  // ordinary least squares of variance on mean
  const double n = double(fit.points.size());
  double sm = 0, sv = 0;
  for (const auto& [m, v] : fit.points) {
    sm += m;
    sv += v;
  }
  const double mm = sm / n, mv = sv / n;
  double sxx = 0, sxy = 0, syy = 0;
  bool any_noise = false;
  for (const auto& [m, v] : fit.points) {
    sxx += (m - mm) * (m - mm);
    sxy += (m - mm) * (v - mv);
    syy += (v - mv) * (v - mv);
    if (v > 1e-9) any_noise = true;
  }
  if (!any_noise) throw DegenerateFit("all variance points are zero (noise-free flats)");
  if (sxx <= 0) throw DegenerateFit("illumination levels are not distinct");

  fit.k_hat = sxy / sxx;
  fit.read_var = mv - fit.k_hat * mm;
  fit.r2 = syy > 0 ? (sxy * sxy) / (sxx * syy) : 1.0;
  if (!(fit.k_hat > 0)) throw DegenerateFit("non-positive PTC slope");
  return fit;
}

KComparison compare_k(const SensorProfile& profile, int iso, const PtcFit& ptc) {
  profile.validate();
  KComparison cmp;
  double analog_gain = double(iso) / double(profile.base_iso);
  cmp.implied_qe = ptc.k_hat / analog_gain;
  cmp.in_band = profile.qe_lo <= cmp.implied_qe && cmp.implied_qe <= profile.qe_hi;
  return cmp;
}

}  // namespace rawsynth

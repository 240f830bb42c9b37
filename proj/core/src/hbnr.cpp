#include "rawsynth/hbnr.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace rawsynth {

namespace {

double norm_cdf(double z) { return 0.5 * std::erfc(-z * 0.7071067811865475244); }

// Acklam's rational approximation with one Halley refinement step.
double norm_ppf(double p) {
  static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                             -2.759285104469687e+02, 1.383577518672690e+02,
                             -3.066479806614716e+01, 2.506628277459239e+00};
  static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                             -1.556989798598866e+02, 6.680131188771972e+01,
                             -1.328068155288572e+01};
  static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                             -2.400758277161838e+00, -2.549732539343734e+00,
                             4.374664141464968e+00,  2.938163982698783e+00};
  static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                             2.445134137142996e+00, 3.754408661907416e+00};
  const double plow = 0.02425;
  double x;
  if (p < plow) {
    double q = std::sqrt(-2.0 * std::log(p));
    x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  } else if (p <= 1.0 - plow) {
    double q = p - 0.5, r = q * q;
    x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
        (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
  } else {
    double q = std::sqrt(-2.0 * std::log(1.0 - p));
    x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  double e = norm_cdf(x) - p;
  double u = e * std::sqrt(2.0 * 3.14159265358979323846) * std::exp(0.5 * x * x);
  return x - u / (1.0 + 0.5 * x * u);
}

constexpr double kTinyLogDensity = -700.0;  // ~log(DBL_MIN)

}  // namespace

const char* hbnr_family_name(HbnrFamily family) {
  switch (family) {
    case HbnrFamily::Gaussian: return "gaussian";
    case HbnrFamily::Uniform: return "uniform";
    case HbnrFamily::TukeyLambda: return "tukey";
  }
  return "gaussian";
}

double HbnrModel::cdf(double x) const {
  switch (family) {
    case HbnrFamily::Gaussian:
      return norm_cdf((x - location) / scale);
    case HbnrFamily::Uniform: {
      double lo = location - scale, hi = location + scale;
      if (x <= lo) return 0.0;
      if (x >= hi) return 1.0;
      return (x - lo) / (hi - lo);
    }
    case HbnrFamily::TukeyLambda:
      return tukey_lambda_cdf((x - location) / scale, shape);
  }
  return 0.0;
}

double HbnrModel::ppf(double p) const {
  switch (family) {
    case HbnrFamily::Gaussian:
      return location + scale * norm_ppf(p);
    case HbnrFamily::Uniform:
      return (location - scale) + p * 2.0 * scale;
    case HbnrFamily::TukeyLambda:
      return location + scale * tukey_lambda_ppf(p, shape);
  }
  return 0.0;
}

HbnrModel fit_hbnr_family(const std::vector<double>& samples, HbnrFamily family) {
  if (samples.empty()) throw DegenerateSamples("no samples");
  const double n = double(samples.size());
  double mean = std::accumulate(samples.begin(), samples.end(), 0.0) / n;
  double var = 0.0;
  for (double x : samples) var += (x - mean) * (x - mean);
  var /= n;
  if (var <= 0) throw DegenerateSamples("zero-variance sample");

  HbnrModel model;
  model.family = family;
  switch (family) {
    case HbnrFamily::Gaussian: {
      model.location = mean;
      model.scale = std::sqrt(var);
      model.selection_score = n * 0.5 * (std::log(2.0 * 3.14159265358979323846 * var) + 1.0);
      break;
    }
    case HbnrFamily::Uniform: {
      auto [lo_it, hi_it] = std::minmax_element(samples.begin(), samples.end());
      double lo = *lo_it, hi = *hi_it;
      model.location = 0.5 * (lo + hi);
      model.scale = 0.5 * (hi - lo);
      model.selection_score = n * std::log(hi - lo);
      break;
    }
    case HbnrFamily::TukeyLambda: {
      TukeyLambdaFit fit = fit_tukey_lambda(samples);
      model.location = fit.mu;
      model.scale = fit.sigma;
      model.shape = fit.lambda;
      double nll = 0.0;
      for (double x : samples) {
        double z = (x - model.location) / model.scale;
        double p = tukey_lambda_cdf(z, model.shape);
        double log_dens;
        if (p <= 0.0 || p >= 1.0) {
          log_dens = kTinyLogDensity;
        } else {
          // density of the quantile form: 1 / (sigma * Q'(p))
          double qprime = std::fabs(model.shape) < 1e-10
                              ? 1.0 / (p * (1.0 - p))
                              : std::pow(p, model.shape - 1.0) +
                                    std::pow(1.0 - p, model.shape - 1.0);
          log_dens = -std::log(model.scale * qprime);
        }
        nll -= log_dens;
      }
      model.selection_score = nll;
      break;
    }
  }
  return model;
}

HbnrModel fit_hbnr(const std::vector<LinearFrame>& frames) {
  if (frames.empty()) throw InvariantViolation("fit_hbnr needs at least one frame");
  std::vector<double> samples;
  for (const auto& f : frames)
    samples.insert(samples.end(), f.values.begin(), f.values.end());

  HbnrModel best;
  bool have_best = false;
  for (HbnrFamily family :
       {HbnrFamily::Gaussian, HbnrFamily::Uniform, HbnrFamily::TukeyLambda}) {
    HbnrModel candidate;
    try {
      candidate = fit_hbnr_family(samples, family);
    } catch (const TooFewSamples&) {
      continue;  // Tukey needs >= 1000 samples
    }
    if (!have_best || candidate.selection_score < best.selection_score) {
      best = candidate;
      have_best = true;
    }
  }
  if (!have_best) throw DegenerateSamples("no family could be fitted");
  return best;
}

LinearFrame expand_bit_depth(const RawFrame& frame, const DarkShading& shading,
                             const HbnrModel& model, const Rng& rng) {
  if (frame.height != shading.height || frame.width != shading.width)
    throw GeometryMismatch("shading map geometry does not match frame");

  LinearFrame out = to_linear(frame);
  const std::uint64_t seed = rng.seed();
  constexpr double kEdgeGuard = 1e-6;
  for (std::size_t i = 0; i < out.values.size(); ++i) {
    double s = shading.mean_map[i];
    double x0 = out.values[i] - s;  // shading-corrected bin center
    Rng pixel_rng(splitmix(seed, i));
    double lo = model.cdf(x0 - 0.5);
    double hi = model.cdf(x0 + 0.5);
    double y;
    if (hi - lo > 1e-12) {
      double u = lo + pixel_rng.uniform_open() * (hi - lo);
      y = model.ppf(u);
    } else {
      // numerically flat tail: fall back to uniform placement in the bin
      y = x0 + (pixel_rng.uniform_open() - 0.5);
    }
    // the round-trip invariant requires strict bin membership
    y = std::clamp(y, x0 - 0.5 + kEdgeGuard, x0 + 0.5 - kEdgeGuard);
    out.values[i] = y + s;
  }
  return out;
}

}  // namespace rawsynth

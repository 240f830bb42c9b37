#include "rawsynth/profiling.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

namespace rawsynth {

DisentangledNoise disentangle(const std::vector<LinearFrame>& frames,
                              const std::vector<std::string>& ids) {
  if (frames.empty()) throw InvariantViolation("disentangle needs at least one frame");
  DisentangledNoise out;
  out.row_means.reserve(frames.size());
  for (std::size_t f = 0; f < frames.size(); ++f) {
    const LinearFrame& frame = frames[f];
    std::vector<double> means(std::size_t(frame.height));
    for (int r = 0; r < frame.height; ++r) {
      double sum = 0.0;
      for (int c = 0; c < frame.width; ++c) sum += frame.at(r, c);
      means[std::size_t(r)] = sum / double(frame.width);
    }
    for (int r = 0; r < frame.height; ++r)
      for (int c = 0; c < frame.width; ++c)
        out.iid_samples.push_back(frame.at(r, c) - means[std::size_t(r)]);
    out.row_means.push_back(std::move(means));
    out.source.push_back(f < ids.size() ? ids[f] : "frame" + std::to_string(f));
  }
  return out;
}

double tukey_lambda_ppf(double p, double lambda) {
  if (std::fabs(lambda) < 1e-10) return std::log(p / (1.0 - p));
  return (std::pow(p, lambda) - std::pow(1.0 - p, lambda)) / lambda;
}

double tukey_lambda_cdf(double x, double lambda) {
  if (std::fabs(lambda) < 1e-10) return 1.0 / (1.0 + std::exp(-x));
  if (lambda > 0) {
    // bounded support [-1/lambda, 1/lambda]
    if (x <= -1.0 / lambda) return 0.0;
    if (x >= 1.0 / lambda) return 1.0;
  }
  double lo = 0.0, hi = 1.0;
  for (int i = 0; i < 200 && hi - lo > 1e-15; ++i) {
    double mid = 0.5 * (lo + hi);
    if (tukey_lambda_ppf(mid, lambda) < x)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

namespace {

double empirical_quantile(const std::vector<double>& sorted, double p) {
  const std::size_t n = sorted.size();
  if (n == 1) return sorted[0];
  double h = p * double(n - 1);
  std::size_t lo = std::size_t(h);
  if (lo >= n - 1) return sorted[n - 1];
  double frac = h - double(lo);
  return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

double pearson(const std::vector<double>& a, const std::vector<double>& b) {
  const std::size_t n = a.size();
  double ma = std::accumulate(a.begin(), a.end(), 0.0) / double(n);
  double mb = std::accumulate(b.begin(), b.end(), 0.0) / double(n);
  double sab = 0, saa = 0, sbb = 0;
  for (std::size_t i = 0; i < n; ++i) {
    double da = a[i] - ma, db = b[i] - mb;
    sab += da * db;
    saa += da * da;
    sbb += db * db;
  }
  if (saa <= 0 || sbb <= 0) return 0.0;
  return sab / std::sqrt(saa * sbb);
}

}  // namespace

TukeyLambdaFit fit_tukey_lambda(const std::vector<double>& samples) {
  if (samples.size() < 1000)
    throw TooFewSamples("tukey-lambda fit needs at least 1000 samples");

  std::vector<double> sorted = samples;
  std::sort(sorted.begin(), sorted.end());
  if (sorted.front() == sorted.back())
    throw DegenerateSamples("zero-variance sample");

  // probability plot on a capped quantile grid; full order statistics add
  // nothing to the PPCC at this resolution
  const std::size_t m = std::min<std::size_t>(sorted.size(), 4096);
  std::vector<double> probs(m), emp(m);
  for (std::size_t i = 0; i < m; ++i) {
    probs[i] = (double(i) + 0.5) / double(m);
    emp[i] = empirical_quantile(sorted, probs[i]);
  }

  auto ppcc = [&](double lambda) {
    std::vector<double> theo(m);
    for (std::size_t i = 0; i < m; ++i) theo[i] = tukey_lambda_ppf(probs[i], lambda);
    return pearson(emp, theo);
  };

  // grid seed, step 0.01 over [-2, 2]
  double best_lambda = -2.0, best_ppcc = -2.0;
  for (int i = 0; i <= 400; ++i) {
    double lambda = -2.0 + 0.01 * i;
    double r = ppcc(lambda);
    if (r > best_ppcc) {
      best_ppcc = r;
      best_lambda = lambda;
    }
  }

  // golden-section refinement around the grid optimum
  const double gr = 0.6180339887498949;
  double a = best_lambda - 0.01, b = best_lambda + 0.01;
  double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
  double f1 = ppcc(x1), f2 = ppcc(x2);
  for (int it = 0; it < 60 && b - a > 1e-7; ++it) {
    if (f1 > f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - gr * (b - a);
      f1 = ppcc(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + gr * (b - a);
      f2 = ppcc(x2);
    }
  }

  TukeyLambdaFit fit;
  fit.lambda = 0.5 * (a + b);
  fit.ppcc = ppcc(fit.lambda);

  // location/scale from the least-squares probability-plot line
  std::vector<double> theo(m);
  for (std::size_t i = 0; i < m; ++i) theo[i] = tukey_lambda_ppf(probs[i], fit.lambda);
  double mt = std::accumulate(theo.begin(), theo.end(), 0.0) / double(m);
  double me = std::accumulate(emp.begin(), emp.end(), 0.0) / double(m);
  double num = 0, den = 0;
  for (std::size_t i = 0; i < m; ++i) {
    num += (theo[i] - mt) * (emp[i] - me);
    den += (theo[i] - mt) * (theo[i] - mt);
  }
  fit.sigma = num / den;
  fit.mu = me - fit.sigma * mt;
  if (!(fit.sigma > 0)) throw DegenerateSamples("non-positive probability-plot slope");
  return fit;
}

namespace {

constexpr double kVarianceFloor = 1e-6;
constexpr double kLogTwoPi = 1.8378770664093454836;

std::vector<double> kmeanspp_init(const std::vector<double>& samples, int k, Rng& rng) {
  std::vector<double> centers;
  centers.reserve(std::size_t(k));
  centers.push_back(samples[rng.uniform_below(samples.size())]);
  std::vector<double> d2(samples.size());
  for (int c = 1; c < k; ++c) {
    double total = 0.0;
    for (std::size_t i = 0; i < samples.size(); ++i) {
      double best = std::numeric_limits<double>::max();
      for (double ctr : centers) {
        double d = samples[i] - ctr;
        best = std::min(best, d * d);
      }
      d2[i] = best;
      total += best;
    }
    if (total <= 0) {
      centers.push_back(samples[rng.uniform_below(samples.size())]);
      continue;
    }
    double target = rng.uniform() * total;
    double acc = 0.0;
    std::size_t pick = samples.size() - 1;
    for (std::size_t i = 0; i < samples.size(); ++i) {
      acc += d2[i];
      if (acc >= target) {
        pick = i;
        break;
      }
    }
    centers.push_back(samples[pick]);
  }
  return centers;
}

}  // namespace

GmmFit fit_gmm(const std::vector<double>& samples, int n_components, Rng& rng) {
  if (n_components < 1) throw InvariantViolation("n_components must be positive");
  if (samples.size() < std::size_t(10) * std::size_t(n_components))
    throw TooFewSamples("gmm fit needs at least 10 samples per component");

  const std::size_t n = samples.size();
  const int k = n_components;

  GmmFit fit;
  fit.n_components = k;
  fit.means = kmeanspp_init(samples, k, rng);
  fit.weights.assign(std::size_t(k), 1.0 / double(k));
  double mean = std::accumulate(samples.begin(), samples.end(), 0.0) / double(n);
  double var = 0.0;
  for (double x : samples) var += (x - mean) * (x - mean);
  var = std::max(var / double(n), kVarianceFloor);
  fit.variances.assign(std::size_t(k), var);

  const std::size_t ks = std::size_t(k);
  std::vector<double> logw(ks), resp(ks);
  std::vector<double> nk(ks), sx(ks), sxx(ks);
  double prev_ll = -std::numeric_limits<double>::max();

  for (int iter = 0; iter < 500; ++iter) {
    for (int c = 0; c < k; ++c) logw[std::size_t(c)] = std::log(fit.weights[std::size_t(c)]);
    std::fill(nk.begin(), nk.end(), 0.0);
    std::fill(sx.begin(), sx.end(), 0.0);
    std::fill(sxx.begin(), sxx.end(), 0.0);

    double ll = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double x = samples[i];
      double max_lp = -std::numeric_limits<double>::max();
      for (int c = 0; c < k; ++c) {
        double v = fit.variances[std::size_t(c)];
        double d = x - fit.means[std::size_t(c)];
        resp[std::size_t(c)] =
            logw[std::size_t(c)] - 0.5 * (kLogTwoPi + std::log(v) + d * d / v);
        max_lp = std::max(max_lp, resp[std::size_t(c)]);
      }
      double denom = 0.0;
      for (int c = 0; c < k; ++c) {
        resp[std::size_t(c)] = std::exp(resp[std::size_t(c)] - max_lp);
        denom += resp[std::size_t(c)];
      }
      ll += max_lp + std::log(denom);
      for (int c = 0; c < k; ++c) {
        double r = resp[std::size_t(c)] / denom;
        nk[std::size_t(c)] += r;
        sx[std::size_t(c)] += r * x;
        sxx[std::size_t(c)] += r * x * x;
      }
    }
    fit.loglik_trace.push_back(ll);
    fit.final_loglik = ll;

    if (iter > 0 && ll - prev_ll < 1e-7 * std::fabs(ll)) {
      fit.converged = true;
      break;
    }
    prev_ll = ll;

    for (int c = 0; c < k; ++c) {
      std::size_t ci = std::size_t(c);
      if (nk[ci] < 1e-10) continue;  // component lost all mass; keep params
      double m = sx[ci] / nk[ci];
      fit.means[ci] = m;
      fit.variances[ci] = std::max(sxx[ci] / nk[ci] - m * m, kVarianceFloor);
      fit.weights[ci] = nk[ci] / double(n);
    }
    // renormalize in case a component was skipped
    double wsum = std::accumulate(fit.weights.begin(), fit.weights.end(), 0.0);
    for (double& w : fit.weights) w /= wsum;
  }
  return fit;
}

std::vector<double> resample(const TukeyLambdaFit& model, std::size_t n, Rng& rng) {
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i)
    out[i] = model.mu + model.sigma * tukey_lambda_ppf(rng.uniform_open(), model.lambda);
  return out;
}

std::vector<double> resample(const GmmFit& model, std::size_t n, Rng& rng) {
  std::vector<double> cdf(model.weights.size());
  std::partial_sum(model.weights.begin(), model.weights.end(), cdf.begin());
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    double u = rng.uniform();
    std::size_t c = std::size_t(std::lower_bound(cdf.begin(), cdf.end(), u) - cdf.begin());
    if (c >= model.weights.size()) c = model.weights.size() - 1;
    out[i] = model.means[c] + std::sqrt(model.variances[c]) * rng.gaussian();
  }
  return out;
}

QqReport qq_compare(const std::vector<double>& samples_a,
                    const std::vector<double>& samples_b, int n_quantiles) {
  if (samples_a.empty() || samples_b.empty())
    throw InvariantViolation("qq_compare needs nonempty samples");
  if (n_quantiles < 2) throw InvariantViolation("n_quantiles must be at least 2");

  std::vector<double> a = samples_a, b = samples_b;
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());

  QqReport rep;
  rep.probabilities.resize(std::size_t(n_quantiles));
  rep.sample_q.resize(std::size_t(n_quantiles));
  rep.model_q.resize(std::size_t(n_quantiles));
  double sq_sum = 0.0;
  for (int i = 0; i < n_quantiles; ++i) {
    double p = (double(i) + 0.5) / double(n_quantiles);
    double qa = empirical_quantile(a, p);
    double qb = empirical_quantile(b, p);
    rep.probabilities[std::size_t(i)] = p;
    rep.sample_q[std::size_t(i)] = qa;
    rep.model_q[std::size_t(i)] = qb;
    double dev = std::fabs(qa - qb);
    rep.max_abs_dev = std::max(rep.max_abs_dev, dev);
    sq_sum += dev * dev;
  }
  rep.rmse = std::sqrt(sq_sum / double(n_quantiles));
  return rep;
}

std::string qq_to_csv(const QqReport& report) {
  std::ostringstream out;
  out.precision(17);
  out << "p,sample_q,model_q\n";
  for (std::size_t i = 0; i < report.probabilities.size(); ++i)
    out << report.probabilities[i] << ',' << report.sample_q[i] << ','
        << report.model_q[i] << '\n';
  return out.str();
}

}  // namespace rawsynth

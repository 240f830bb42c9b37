#ifndef RAWSYNTH_PROFILING_HPP
#define RAWSYNTH_PROFILING_HPP

#include <string>
#include <vector>

#include "rawsynth/frame.hpp"
#include "rawsynth/rng.hpp"

namespace rawsynth {

/// Signal-independent noise split into an i.i.d. residual pool and per-row
/// banding means. Reconstruction is exact: residual grid + broadcast row
/// means = the input frames.
struct DisentangledNoise {
  std::vector<double> iid_samples;                 // flattened residuals
  std::vector<std::vector<double>> row_means;      // [frame][row]
  std::vector<std::string> source;                 // frame ids
};

struct TukeyLambdaFit {
  double lambda = 0.0;
  double mu = 0.0;
  double sigma = 1.0;
  double ppcc = 0.0;  // probability-plot correlation at lambda
};

struct GmmFit {
  int n_components = 0;
  std::vector<double> weights;
  std::vector<double> means;
  std::vector<double> variances;
  double final_loglik = 0.0;
  bool converged = false;
  std::vector<double> loglik_trace;  // per-iteration, non-decreasing
};

struct QqReport {
  std::vector<double> probabilities;
  std::vector<double> sample_q;
  std::vector<double> model_q;
  double max_abs_dev = 0.0;
  double rmse = 0.0;
};

/// Splits shading-corrected frames into per-row means (banding) and the
/// flattened i.i.d. residual pool used for distribution fitting.
DisentangledNoise disentangle(const std::vector<LinearFrame>& frames,
                              const std::vector<std::string>& ids = {});

// Tukey-Lambda quantile function and CDF (standardized, mu=0 sigma=1).
// Q(p) = (p^l - (1-p)^l) / l, with the logistic limit log(p/(1-p)) at l=0.
double tukey_lambda_ppf(double p, double lambda);
double tukey_lambda_cdf(double x, double lambda);

/// Shape by PPCC maximization: grid seed at step 0.01 over [-2, 2], then
/// golden-section refinement; location/scale from the least-squares line of
/// the probability plot at the optimum.
TukeyLambdaFit fit_tukey_lambda(const std::vector<double>& samples);

/// 1-D Gaussian mixture EM with k-means++ initialization. Stops when the
/// log-likelihood gain drops below 1e-7 * |loglik| or after 500 iterations;
/// variances floored at 1e-6.
GmmFit fit_gmm(const std::vector<double>& samples, int n_components, Rng& rng);

std::vector<double> resample(const TukeyLambdaFit& model, std::size_t n, Rng& rng);
std::vector<double> resample(const GmmFit& model, std::size_t n, Rng& rng);

/// Linear-interpolation empirical quantiles of both sets at probabilities
/// (i + 0.5) / n_quantiles; sample_q comes from samples_a, model_q from
/// samples_b.
QqReport qq_compare(const std::vector<double>& samples_a,
                    const std::vector<double>& samples_b, int n_quantiles);

/// CSV rows "p,sample_q,model_q" with a header line.
std::string qq_to_csv(const QqReport& report);

}  // namespace rawsynth

#endif  // RAWSYNTH_PROFILING_HPP

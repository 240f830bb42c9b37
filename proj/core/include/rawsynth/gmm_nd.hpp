#ifndef RAWSYNTH_GMM_ND_HPP
#define RAWSYNTH_GMM_ND_HPP

#include <Eigen/Dense>
#include <vector>

#include "rawsynth/rng.hpp"

namespace rawsynth {

/// d-dimensional Gaussian mixture with full covariances, d <= 8. Used for
/// patch-mode noise profiling; same EM contract as the 1-D fit.
struct GmmNdFit {
  int n_components = 0;
  int dim = 0;
  std::vector<double> weights;
  std::vector<Eigen::VectorXd> means;
  std::vector<Eigen::MatrixXd> covariances;
  double final_loglik = 0.0;
  bool converged = false;
  std::vector<double> loglik_trace;
};

/// EM over rows of samples (n x d). k-means++ init, stop at relative
/// log-likelihood gain < 1e-7 or 500 iterations, covariance ridge 1e-6.
GmmNdFit fit_gmm_nd(const Eigen::MatrixXd& samples, int n_components, Rng& rng);

Eigen::MatrixXd resample(const GmmNdFit& model, std::size_t n, Rng& rng);

/// Extracts non-overlapping ph x pw patches from a frame's residual grid as
/// rows of a sample matrix (d = ph * pw <= 8).
Eigen::MatrixXd patch_samples(const std::vector<double>& values, int height,
                              int width, int ph, int pw);

}  // namespace rawsynth

#endif  // RAWSYNTH_GMM_ND_HPP

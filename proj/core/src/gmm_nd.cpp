#include "rawsynth/gmm_nd.hpp"

#include <cmath>
#include <limits>

#include "rawsynth/errors.hpp"

namespace rawsynth {

namespace {

constexpr double kRidge = 1e-6;
constexpr double kLogTwoPi = 1.8378770664093454836;

std::vector<Eigen::VectorXd> kmeanspp_init(const Eigen::MatrixXd& samples, int k,
                                           Rng& rng) {
  const auto n = samples.rows();
  std::vector<Eigen::VectorXd> centers;
  centers.reserve(std::size_t(k));
  centers.push_back(samples.row(Eigen::Index(rng.uniform_below(std::uint64_t(n)))));
  Eigen::VectorXd d2(n);
  for (int c = 1; c < k; ++c) {
    double total = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      double best = std::numeric_limits<double>::max();
      for (const auto& ctr : centers)
        best = std::min(best, (samples.row(i).transpose() - ctr).squaredNorm());
      d2[i] = best;
      total += best;
    }
    Eigen::Index pick = n - 1;
    if (total > 0) {
      double target = rng.uniform() * total;
      double acc = 0.0;
      for (Eigen::Index i = 0; i < n; ++i) {
        acc += d2[i];
        if (acc >= target) {
          pick = i;
          break;
        }
      }
    } else {
      pick = Eigen::Index(rng.uniform_below(std::uint64_t(n)));
    }
    centers.push_back(samples.row(pick));
  }
  return centers;
}

}  // namespace

GmmNdFit fit_gmm_nd(const Eigen::MatrixXd& samples, int n_components, Rng& rng) {
  const Eigen::Index n = samples.rows();
  const int d = int(samples.cols());
  if (d < 1 || d > 8) throw InvariantViolation("patch dimension must lie in [1,8]");
  if (n_components < 1) throw InvariantViolation("n_components must be positive");
  if (n < Eigen::Index(10) * n_components)
    throw TooFewSamples("gmm fit needs at least 10 samples per component");

  const int k = n_components;
  GmmNdFit fit;
  fit.n_components = k;
  fit.dim = d;
  fit.means = kmeanspp_init(samples, k, rng);
  fit.weights.assign(std::size_t(k), 1.0 / double(k));

  Eigen::VectorXd mean = samples.colwise().mean();
  Eigen::MatrixXd centered = samples.rowwise() - mean.transpose();
  Eigen::MatrixXd cov = centered.transpose() * centered / double(n) +
                        kRidge * Eigen::MatrixXd::Identity(d, d);
  fit.covariances.assign(std::size_t(k), cov);

  const std::size_t ks = std::size_t(k);
  std::vector<Eigen::LLT<Eigen::MatrixXd>> chol(ks);
  std::vector<double> logdet(ks);
  Eigen::MatrixXd resp(n, k);
  double prev_ll = -std::numeric_limits<double>::max();

  for (int iter = 0; iter < 500; ++iter) {
    for (int c = 0; c < k; ++c) {
      chol[std::size_t(c)].compute(fit.covariances[std::size_t(c)]);
      double ld = 0.0;
      for (int j = 0; j < d; ++j)
        ld += std::log(chol[std::size_t(c)].matrixL()(j, j));
      logdet[std::size_t(c)] = 2.0 * ld;
    }

    double ll = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      double max_lp = -std::numeric_limits<double>::max();
      for (int c = 0; c < k; ++c) {
        Eigen::VectorXd diff = samples.row(i).transpose() - fit.means[std::size_t(c)];
        double maha = chol[std::size_t(c)].matrixL().solve(diff).squaredNorm();
        double lp = std::log(fit.weights[std::size_t(c)]) -
                    0.5 * (d * kLogTwoPi + logdet[std::size_t(c)] + maha);
        resp(i, c) = lp;
        max_lp = std::max(max_lp, lp);
      }
      double denom = 0.0;
      for (int c = 0; c < k; ++c) {
        resp(i, c) = std::exp(resp(i, c) - max_lp);
        denom += resp(i, c);
      }
      ll += max_lp + std::log(denom);
      resp.row(i) /= denom;
    }
    fit.loglik_trace.push_back(ll);
    fit.final_loglik = ll;

    if (iter > 0 && ll - prev_ll < 1e-7 * std::fabs(ll)) {
      fit.converged = true;
      break;
    }
    prev_ll = ll;

    for (int c = 0; c < k; ++c) {
      double nk = resp.col(c).sum();
      if (nk < 1e-10) continue;
      Eigen::VectorXd m = (resp.col(c).transpose() * samples).transpose() / nk;
      Eigen::MatrixXd cv = Eigen::MatrixXd::Zero(d, d);
      for (Eigen::Index i = 0; i < n; ++i) {
        Eigen::VectorXd diff = samples.row(i).transpose() - m;
        cv.noalias() += resp(i, c) * diff * diff.transpose();
      }
      cv /= nk;
      cv += kRidge * Eigen::MatrixXd::Identity(d, d);
      fit.means[std::size_t(c)] = m;
      fit.covariances[std::size_t(c)] = cv;
      fit.weights[std::size_t(c)] = nk / double(n);
    }
    double wsum = 0.0;
    for (double w : fit.weights) wsum += w;
    for (double& w : fit.weights) w /= wsum;
  }
  return fit;
}

Eigen::MatrixXd resample(const GmmNdFit& model, std::size_t n, Rng& rng) {
  std::vector<double> cdf(model.weights.size());
  double acc = 0.0;
  for (std::size_t c = 0; c < model.weights.size(); ++c) {
    acc += model.weights[c];
    cdf[c] = acc;
  }
  std::vector<Eigen::MatrixXd> chol_l(model.covariances.size());
  for (std::size_t c = 0; c < model.covariances.size(); ++c)
    chol_l[c] = Eigen::LLT<Eigen::MatrixXd>(model.covariances[c]).matrixL();

  Eigen::MatrixXd out(Eigen::Index(n), model.dim);
  for (std::size_t i = 0; i < n; ++i) {
    double u = rng.uniform();
    std::size_t c = 0;
    while (c + 1 < cdf.size() && u > cdf[c]) ++c;
    Eigen::VectorXd z(model.dim);
    for (int j = 0; j < model.dim; ++j) z[j] = rng.gaussian();
    out.row(Eigen::Index(i)) = (model.means[c] + chol_l[c] * z).transpose();
  }
  return out;
}

Eigen::MatrixXd patch_samples(const std::vector<double>& values, int height,
                              int width, int ph, int pw) {
  if (ph < 1 || pw < 1 || ph * pw > 8)
    throw InvariantViolation("patch must satisfy 1 <= ph*pw <= 8");
  const int rows = height / ph;
  const int cols = width / pw;
  Eigen::MatrixXd out(Eigen::Index(rows) * cols, ph * pw);
  Eigen::Index s = 0;
  for (int br = 0; br < rows; ++br) {
    for (int bc = 0; bc < cols; ++bc, ++s) {
      int j = 0;
      for (int r = 0; r < ph; ++r)
        for (int c = 0; c < pw; ++c, ++j)
          out(s, j) = values[std::size_t(br * ph + r) * width + (bc * pw + c)];
    }
  }
  return out;
}

}  // namespace rawsynth

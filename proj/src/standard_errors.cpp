#include <Eigen/Dense>
#include <cmath>
#include <limits>

#include "estimator_detail.hpp"
#include "fitpa/estimator.hpp"

namespace fitpa {

StandardErrors standard_errors(const SufficientStats& stats, std::span<const double> A, std::span<const double> eta,
                               const EstimationConfig& config) {
  detail::check_parameters(stats, A, eta);
  const auto ties = detail::make_ties(stats);
  const auto n_bins = static_cast<Eigen::Index>(stats.bin_count());
  const auto mass = detail::fitness_mass(stats, eta);
  const auto z = detail::normalizers(stats, A, mass);

  // Hessian of the penalized objective in log A over all bins.
  Eigen::MatrixXd hess = Eigen::MatrixXd::Zero(n_bins, n_bins);
  Eigen::VectorXd p(n_bins);
  for (std::size_t s = 0; s < stats.step_count(); ++s) {
    const double* row = mass.data() + s * stats.bin_count();
    for (Eigen::Index b = 0; b < n_bins; ++b) p[b] = A[b] * row[b] / z[s];
    const double m = stats.step_selections[s];
    hess.diagonal() -= m * p;
    hess.noalias() += m * p * p.transpose();
  }
  if (config.smoothing > 0.0 && n_bins >= 3) {
    Eigen::MatrixXd second = Eigen::MatrixXd::Zero(n_bins - 2, n_bins);
    for (Eigen::Index k = 0; k + 2 < n_bins; ++k) {
      second(k, k) = 1.0;
      second(k, k + 1) = -2.0;
      second(k, k + 2) = 1.0;
    }
    hess.noalias() -= 2.0 * config.smoothing * second.transpose() * second;
  }

  // Chain through the ties onto the free bins, then drop the bin that
  // carries degree 0: it is pinned by the normalization A_0 = 1.
  const std::size_t anchor = ties.left[stats.binning.bin_of(0)];
  std::vector<std::size_t> params;
  for (std::size_t b = 0; b < stats.bin_count(); ++b) {
    if (ties.free[b] && b != anchor) params.push_back(b);
  }
  const auto n_params = static_cast<Eigen::Index>(params.size());
  Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(n_bins, n_params);
  for (Eigen::Index j = 0; j < n_params; ++j) {
    const auto& inf = ties.influence[params[static_cast<std::size_t>(j)]];
    for (std::size_t b = inf.lo; b <= inf.hi; ++b) jac(static_cast<Eigen::Index>(b), j) = inf.coef[b - inf.lo];
  }

  StandardErrors out;
  out.log_A_sigma.assign(stats.bin_count(), 0.0);
  if (n_params == 0) return out;

  const Eigen::MatrixXd info = -(jac.transpose() * hess * jac);
  Eigen::MatrixXd cov;
  Eigen::LLT<Eigen::MatrixXd> llt(info);
  if (llt.info() == Eigen::Success) {
    cov = llt.solve(Eigen::MatrixXd::Identity(n_params, n_params));
  } else {
    out.fallback = true;
    cov = Eigen::MatrixXd::Zero(n_params, n_params);
    for (Eigen::Index j = 0; j < n_params; ++j) {
      cov(j, j) = info(j, j) > 0.0 ? 1.0 / info(j, j) : std::numeric_limits<double>::infinity();
    }
  }
  for (Eigen::Index b = 0; b < n_bins; ++b) {
    const Eigen::RowVectorXd t = jac.row(b);
    double var = 0.0;
    if (out.fallback) {
      for (Eigen::Index j = 0; j < n_params; ++j) {
        if (t[j] != 0.0) var += t[j] * t[j] * cov(j, j);
      }
    } else {
      var = (t * cov * t.transpose())(0, 0);
    }
    out.log_A_sigma[static_cast<std::size_t>(b)] = std::sqrt(std::max(var, 0.0));
  }
  return out;
}

}  // namespace fitpa

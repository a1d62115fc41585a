#include "paneldiag/inference.hpp"

#include <algorithm>
#include <unordered_map>

#include "paneldiag/stats.hpp"

namespace paneldiag {

Eigen::MatrixXd crv1_vcov(const FitResult& fit, const DesignMatrix& X,
                          std::span<const int> cluster) {
  const int n = fit.n_obs;
  const int p = static_cast<int>(fit.coefficients.size());
  if (X.rows() != n || static_cast<int>(cluster.size()) != n)
    throw PanelError(ErrorCode::AlignmentError, "cluster ids are not row-aligned with the fit");
  if (fit.demeaned_design.rows() != n || fit.demeaned_design.cols() != p)
    throw std::invalid_argument("crv1_vcov: fit carries no demeaned design (oracle fits are not supported)");
  if (n <= fit.k_params)
    throw PanelError(ErrorCode::DegenerateDesign, "no residual degrees of freedom (n <= k)");

  // Per-cluster scores s_g = X_g' u_g.
  std::unordered_map<int, int> cluster_index;
  for (int r = 0; r < n; ++r) cluster_index.emplace(cluster[r], static_cast<int>(cluster_index.size()));
  const int n_clusters = static_cast<int>(cluster_index.size());
  if (n_clusters < 2)
    throw PanelError(ErrorCode::TooFewClusters, "cluster-robust variance needs >= 2 clusters");

  Eigen::MatrixXd scores = Eigen::MatrixXd::Zero(n_clusters, p);
  for (int r = 0; r < n; ++r)
    scores.row(cluster_index[cluster[r]]) += fit.residuals[r] * fit.demeaned_design.row(r);
  Eigen::MatrixXd meat = scores.transpose() * scores;

  Eigen::MatrixXd gram = fit.demeaned_design.transpose() * fit.demeaned_design;
  Eigen::MatrixXd bread = gram.ldlt().solve(Eigen::MatrixXd::Identity(p, p));

  const double g = n_clusters;
  const double scale = g / (g - 1.0) * (n - 1.0) / (n - fit.k_params);
  Eigen::MatrixXd vcov = scale * bread * meat * bread;
  return (vcov + vcov.transpose()) / 2.0;
}

void attach_unit_cluster_vcov(FitResult& fit, const DesignMatrix& X) {
  fit.vcov = crv1_vcov(fit, X, X.fe_unit);
  fit.n_clusters = X.n_units;
}

WaldResult wald_test(const FitResult& fit, const Restriction& r, DofRule dof_rule) {
  const int p = static_cast<int>(fit.coefficients.size());
  const int m = static_cast<int>(r.R.rows());
  if (m < 1) throw std::invalid_argument("wald_test: at least one restriction required");
  if (static_cast<int>(r.R.cols()) != p || static_cast<int>(r.q.size()) != m)
    throw PanelError(ErrorCode::AlignmentError,
                     "restriction matrix does not align with the coefficient vector");
  if (!fit.has_vcov())
    throw std::invalid_argument("wald_test: fit has no variance matrix attached");

  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> rank_check(r.R);
  rank_check.setThreshold(1e-12);
  if (static_cast<int>(rank_check.rank()) < m)
    throw PanelError(ErrorCode::RedundantRestrictions, "restriction rows are linearly dependent");

  WaldResult result;
  result.m = m;
  result.dof_denom =
      dof_rule == DofRule::NMinusK ? fit.n_obs - fit.k_params : fit.n_clusters - 1;
  if (result.dof_denom < 1)
    throw std::invalid_argument("wald_test: denominator dof must be positive");

  const Eigen::VectorXd diff = r.R * fit.coefficients - r.q;

  // Exactly satisfied null (e.g. noiseless data, where the variance matrix
  // degenerates to zero as well): statistic 0 by definition.
  const double diff_scale =
      std::max({1.0, r.q.cwiseAbs().maxCoeff(), (r.R * fit.coefficients).cwiseAbs().maxCoeff()});
  if (diff.cwiseAbs().maxCoeff() <= 1e-10 * diff_scale) {
    result.statistic = 0.0;
    result.p_f = 1.0;
    result.p_chi2 = 1.0;
    return result;
  }

  Eigen::MatrixXd rvr = r.R * fit.vcov * r.R.transpose();
  rvr = (rvr + rvr.transpose()) / 2.0;
  Eigen::FullPivLU<Eigen::MatrixXd> lu(rvr);
  if (!lu.isInvertible())
    throw PanelError(ErrorCode::SingularRestrictionCovariance,
                     "R V R' is singular; restrictions have no sampling variance");

  result.statistic = std::max(0.0, diff.dot(lu.solve(diff)) / m);
  result.p_f = f_sf(result.statistic, m, result.dof_denom);
  result.p_chi2 = chi2_sf(m * result.statistic, m);
  return result;
}

}  // namespace paneldiag

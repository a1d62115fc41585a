#pragma once

#include <Eigen/Dense>
#include <span>

#include "paneldiag/design.hpp"
#include "paneldiag/fe.hpp"

namespace paneldiag {

// Null hypothesis R beta = q over the fit's coefficient vector.
struct Restriction {
  Eigen::MatrixXd R;  // m x p, rows aligned with FitResult coefficients
  Eigen::VectorXd q;  // m
};

enum class DofRule {
  NMinusK,         // denominator dof n - k, as printed in the F statistic
  ClustersMinus1,  // G - 1, the convention some practitioners expect
};

struct WaldResult {
  double statistic = 0.0;  // quadratic form / m
  int m = 0;
  int dof_denom = 0;
  double p_f = 1.0;     // from F(m, dof_denom)
  double p_chi2 = 1.0;  // from chi2(m) applied to m * statistic

  bool reject_at(double alpha) const { return p_f <= alpha; }
};

// CRV1 cluster-robust sandwich on the demeaned design, scaled by
// G/(G-1) * (n-1)/(n-k). Cluster ids are per row; the panel default is the
// unit id.
Eigen::MatrixXd crv1_vcov(const FitResult& fit, const DesignMatrix& X,
                          std::span<const int> cluster);

// Convenience: clusters on the unit dimension and stores the matrix (and
// cluster count) on the fit.
void attach_unit_cluster_vcov(FitResult& fit, const DesignMatrix& X);

WaldResult wald_test(const FitResult& fit, const Restriction& r,
                     DofRule dof_rule = DofRule::NMinusK);

}  // namespace paneldiag

#pragma once

#include <Eigen/Dense>
#include <span>
#include <vector>

#include "paneldiag/design.hpp"
#include "paneldiag/panel.hpp"

namespace paneldiag {

// Least-squares fit with both fixed effects absorbed. k_params counts the
// design columns plus the absorbed dof: p + N + T - 1 on a balanced panel
// (the two fixed-effect sets share one collinearity).
struct FitResult {
  Eigen::VectorXd coefficients;      // per design column
  std::vector<DesignColumn> cols;    // labels carried from the design
  Eigen::VectorXd residuals;         // per row, on demeaned data
  int n_obs = 0;
  int k_params = 0;
  int n_clusters = 0;
  Eigen::MatrixXd vcov;              // p x p; empty until inference attaches it
  Eigen::MatrixXd demeaned_design;   // cached projection of the design columns

  bool has_vcov() const { return vcov.size() > 0; }
  int find_col(const ColumnRole& role) const;  // -1 when absent
};

// Residual from projecting out both group-mean spaces by alternating
// demeaning sweeps. Balanced two-way groups converge in one sweep,
// equivalent to y_it - ybar_i - ybar_t + ybar.
Eigen::VectorXd demean_two_way(const Eigen::VectorXd& values,
                               std::span<const int> fe_unit,
                               std::span<const int> fe_time,
                               double tol = 1e-10, int max_iter = 100);

// Demeans the outcome and every design column, then solves least squares by
// column-pivoted QR. The design must already be full rank after demeaning
// (run drop_collinear first).
FitResult fit(const PanelDataset& d, const DesignMatrix& X);

// Verification oracle: plain OLS on [X | unit dummies | time dummies] with
// one time dummy dropped, returning the coefficients on the X columns.
// Guarded to small panels; the production path is fit().
FitResult dummy_oracle_fit(const PanelDataset& d, const DesignMatrix& X);

}  // namespace paneldiag

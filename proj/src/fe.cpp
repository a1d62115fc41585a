#include "paneldiag/fe.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace paneldiag {

int FitResult::find_col(const ColumnRole& role) const {
  for (size_t j = 0; j < cols.size(); ++j)
    if (cols[j].role == role) return static_cast<int>(j);
  return -1;
}

namespace {

void subtract_group_means(Eigen::VectorXd& x, std::span<const int> groups, int n_groups,
                          std::vector<double>& sums, std::vector<double>& counts) {
  sums.assign(n_groups, 0.0);
  counts.assign(n_groups, 0.0);
  for (Eigen::Index r = 0; r < x.size(); ++r) {
    sums[groups[r]] += x[r];
    counts[groups[r]] += 1.0;
  }
  for (int g = 0; g < n_groups; ++g) sums[g] /= counts[g];
  for (Eigen::Index r = 0; r < x.size(); ++r) x[r] -= sums[groups[r]];
}

}  // namespace

Eigen::VectorXd demean_two_way(const Eigen::VectorXd& values, std::span<const int> fe_unit,
                               std::span<const int> fe_time, double tol, int max_iter) {
  const size_t n = static_cast<size_t>(values.size());
  if (n == 0 || fe_unit.size() != n || fe_time.size() != n)
    throw std::invalid_argument("demean_two_way: group ids must align with values");
  if (tol <= 0.0) throw std::invalid_argument("demean_two_way: tol must be positive");

  const int n_units = *std::max_element(fe_unit.begin(), fe_unit.end()) + 1;
  const int n_times = *std::max_element(fe_time.begin(), fe_time.end()) + 1;

  Eigen::VectorXd x = values;
  Eigen::VectorXd prev(x.size());
  std::vector<double> sums, counts;
  for (int iter = 0; iter < max_iter; ++iter) {
    prev = x;
    subtract_group_means(x, fe_unit, n_units, sums, counts);
    subtract_group_means(x, fe_time, n_times, sums, counts);
    if ((x - prev).cwiseAbs().maxCoeff() <= tol) return x;
  }
  throw PanelError(ErrorCode::ConvergenceFailure,
                   "two-way demeaning did not converge in " + std::to_string(max_iter) +
                       " sweeps");
}

FitResult fit(const PanelDataset& d, const DesignMatrix& X) {
  const int n = X.rows();
  if (n == 0) throw PanelError(ErrorCode::EmptyDesign, "design has no rows");
  if (n != d.n_obs())
    throw std::invalid_argument("fit: design rows do not match the dataset");
  const int p = X.n_cols();
  if (p == 0)
    throw PanelError(ErrorCode::DegenerateDesign, "no regressor columns in the design");

  Eigen::VectorXd y = Eigen::Map<const Eigen::VectorXd>(d.outcomes().data(), n);
  Eigen::VectorXd y_tilde = demean_two_way(y, X.fe_unit, X.fe_time);
  Eigen::MatrixXd x_tilde(n, p);
  for (int j = 0; j < p; ++j)
    x_tilde.col(j) = demean_two_way(X.values.col(j), X.fe_unit, X.fe_time);

  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(x_tilde);
  qr.setThreshold(1e-9);
  if (static_cast<int>(qr.rank()) < p) {
    std::string offending;
    const auto& perm = qr.colsPermutation().indices();
    for (int j = static_cast<int>(qr.rank()); j < p; ++j)
      offending += (offending.empty() ? "" : ", ") + X.cols[perm[j]].label;
    throw PanelError(ErrorCode::RankDeficient,
                     "design rank-deficient after demeaning; offending columns: " + offending);
  }

  FitResult result;
  result.coefficients = qr.solve(y_tilde);
  result.cols = X.cols;
  result.residuals = y_tilde - x_tilde * result.coefficients;
  result.n_obs = n;
  result.k_params = p + d.n_units() + d.n_periods() - 1;
  result.n_clusters = d.n_units();
  result.demeaned_design = std::move(x_tilde);
  return result;
}

FitResult dummy_oracle_fit(const PanelDataset& d, const DesignMatrix& X) {
  const int n = X.rows();
  const int p = X.n_cols();
  const int N = d.n_units();
  const int T = d.n_periods();
  if (n > 10000)
    throw PanelError(ErrorCode::TooLargeForOracle,
                     "dummy-variable oracle is guarded to n_obs <= 10000");
  if (n == 0) throw PanelError(ErrorCode::EmptyDesign, "design has no rows");
  if (p == 0)
    throw PanelError(ErrorCode::DegenerateDesign, "no regressor columns in the design");

  // [X | all unit dummies | time dummies with the last period dropped]
  const int k = p + N + T - 1;
  Eigen::MatrixXd full = Eigen::MatrixXd::Zero(n, k);
  full.leftCols(p) = X.values;
  for (int row = 0; row < n; ++row) {
    full(row, p + X.row_unit(row)) = 1.0;
    const int t = X.row_period(row);
    if (t < T) full(row, p + N + t - 1) = 1.0;
  }

  Eigen::VectorXd y = Eigen::Map<const Eigen::VectorXd>(d.outcomes().data(), n);
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(full);
  qr.setThreshold(1e-9);
  if (static_cast<int>(qr.rank()) < k)
    throw PanelError(ErrorCode::RankDeficient, "dummy-variable design is rank-deficient");

  Eigen::VectorXd beta = qr.solve(y);
  FitResult result;
  result.coefficients = beta.head(p);
  result.cols = X.cols;
  result.residuals = y - full * beta;
  result.n_obs = n;
  result.k_params = k;
  result.n_clusters = N;
  return result;
}

}  // namespace paneldiag

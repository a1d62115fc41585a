#include "paneldiag/diagnostics.hpp"

#include <algorithm>
#include <cmath>

#include "paneldiag/design.hpp"
#include "paneldiag/fe.hpp"

namespace paneldiag {

namespace {

FitResult fit_with_vcov(const PanelDataset& d, const DesignMatrix& raw) {
  const CollinearityReport pruned = drop_collinear(raw);
  FitResult result = fit(d, pruned.design);
  attach_unit_cluster_vcov(result, pruned.design);
  return result;
}

double se_of(const FitResult& fit, int col) { return std::sqrt(fit.vcov(col, col)); }

}  // namespace

DynamicsTestReport test_dynamics(const PanelDataset& d, DynamicsMode mode) {
  // Static fit for tau_hat; no variance needed, it only enters q.
  const CollinearityReport static_design = drop_collinear(build_static(d));
  const FitResult static_fit = fit(d, static_design.design);
  const int treat_col = static_fit.find_col(ColumnRole{RoleKind::StaticTreatment, 0, 0});
  if (treat_col < 0)
    throw PanelError(ErrorCode::DegenerateDesign, "treatment column collinear with fixed effects");

  DynamicsTestReport report;
  report.mode = mode;
  report.tau_hat = static_fit.coefficients[treat_col];

  const FitResult event_fit = fit_with_vcov(d, build_event_study(d));
  std::vector<int> post_cols;
  for (size_t j = 0; j < event_fit.cols.size(); ++j) {
    const ColumnRole& role = event_fit.cols[j].role;
    if (role.kind == RoleKind::EventTime && role.rel >= 0) post_cols.push_back(static_cast<int>(j));
  }
  const int n_post = static_cast<int>(post_cols.size());
  if (n_post < 2)
    throw PanelError(ErrorCode::NotEnoughPostPeriods,
                     "dynamics test needs at least 2 post-treatment coefficients");

  for (int col : post_cols)
    report.gamma_post.push_back({0, event_fit.cols[col].role.rel,
                                 event_fit.coefficients[col], se_of(event_fit, col)});

  const int p = static_cast<int>(event_fit.coefficients.size());
  Restriction restriction;
  if (mode == DynamicsMode::QAgainstTau) {
    restriction.R = Eigen::MatrixXd::Zero(n_post, p);
    restriction.q = Eigen::VectorXd::Constant(n_post, report.tau_hat);
    for (int i = 0; i < n_post; ++i) restriction.R(i, post_cols[i]) = 1.0;
  } else {
    restriction.R = Eigen::MatrixXd::Zero(n_post - 1, p);
    restriction.q = Eigen::VectorXd::Zero(n_post - 1);
    for (int i = 0; i + 1 < n_post; ++i) {
      restriction.R(i, post_cols[i]) = 1.0;
      restriction.R(i, post_cols[i + 1]) = -1.0;
    }
  }
  report.wald = wald_test(event_fit, restriction);
  return report;
}

CohortHeterogeneityReport test_cohort_heterogeneity(const PanelDataset& d,
                                                    std::optional<AdoptionTime> reference,
                                                    HetScope scope) {
  const std::vector<int> cohorts = treated_cohorts(d);
  if (cohorts.size() < 2)
    throw PanelError(ErrorCode::NeedTwoCohorts,
                     "cohort heterogeneity test needs >= 2 treated cohorts");

  CohortHeterogeneityReport report;
  report.scope = scope;
  report.reference_cohort = reference.value_or(AdoptionTime::finite(cohorts.front()));

  const FitResult ifit = fit_with_vcov(d, build_interacted(d, report.reference_cohort));

  std::vector<int> dev_cols;
  for (size_t j = 0; j < ifit.cols.size(); ++j) {
    const ColumnRole& role = ifit.cols[j].role;
    if (role.kind == RoleKind::EventTime)
      report.common.push_back({0, role.rel, ifit.coefficients[j], se_of(ifit, static_cast<int>(j))});
    if (role.kind == RoleKind::CohortDeviation) {
      report.deviations.push_back(
          {role.cohort, role.rel, ifit.coefficients[j], se_of(ifit, static_cast<int>(j))});
      if (scope == HetScope::AllPeriods || role.rel >= 0) dev_cols.push_back(static_cast<int>(j));
    }
  }
  if (dev_cols.empty())
    throw PanelError(ErrorCode::DegenerateDesign,
                     "no cohort-deviation columns survive the collinearity drop");

  const int p = static_cast<int>(ifit.coefficients.size());
  Restriction restriction;
  restriction.R = Eigen::MatrixXd::Zero(static_cast<int>(dev_cols.size()), p);
  restriction.q = Eigen::VectorXd::Zero(static_cast<int>(dev_cols.size()));
  for (size_t i = 0; i < dev_cols.size(); ++i) restriction.R(static_cast<int>(i), dev_cols[i]) = 1.0;
  report.wald = wald_test(ifit, restriction);

  // Cohort-level event studies: gamma_s + delta_s^c, dropped or absent terms
  // contributing zero. Matches the saturated fit coefficient-by-coefficient.
  for (int g : cohorts) {
    for (int t = 1; t <= d.n_periods(); ++t) {
      const int s = t - g;
      if (s == -1) continue;
      double value = 0.0;
      const int common_col = ifit.find_col(ColumnRole{RoleKind::EventTime, 0, s});
      if (common_col >= 0) value += ifit.coefficients[common_col];
      if (g != report.reference_cohort.period()) {
        const int dev_col = ifit.find_col(ColumnRole{RoleKind::CohortDeviation, g, s});
        if (dev_col >= 0) value += ifit.coefficients[dev_col];
      }
      report.reconstructed.push_back({g, s, value, 0.0});
    }
  }
  return report;
}

std::vector<EstimateRow> cohort_event_study(const PanelDataset& d) {
  const FitResult sfit = fit_with_vcov(d, build_saturated(d));
  std::vector<EstimateRow> rows;
  for (size_t j = 0; j < sfit.cols.size(); ++j) {
    const ColumnRole& role = sfit.cols[j].role;
    rows.push_back({role.cohort, role.rel, sfit.coefficients[j], se_of(sfit, static_cast<int>(j))});
  }
  std::stable_sort(rows.begin(), rows.end(), [](const EstimateRow& a, const EstimateRow& b) {
    return std::pair(a.cohort, a.rel) < std::pair(b.cohort, b.rel);
  });
  return rows;
}

}  // namespace paneldiag

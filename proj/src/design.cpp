#include "paneldiag/design.hpp"

#include <algorithm>
#include <numeric>

#include "paneldiag/fe.hpp"

namespace paneldiag {

namespace {

DesignMatrix base_design(const PanelDataset& d, int n_cols) {
  DesignMatrix X;
  X.n_units = d.n_units();
  X.n_periods = d.n_periods();
  X.values = Eigen::MatrixXd::Zero(d.n_obs(), n_cols);
  X.cols.reserve(n_cols);
  X.fe_unit.resize(d.n_obs());
  X.fe_time.resize(d.n_obs());
  for (int row = 0; row < d.n_obs(); ++row) {
    X.fe_unit[row] = d.row_unit(row);
    X.fe_time[row] = d.row_period(row) - 1;
  }
  return X;
}

// Relative periods realized by a cohort adopting at g: t - g over t = 1..T,
// with the reference period -1 removed.
std::vector<int> realized_rel_periods(int g, int T) {
  std::vector<int> rel;
  for (int t = 1; t <= T; ++t)
    if (t - g != -1) rel.push_back(t - g);
  return rel;
}

std::string event_label(int s) { return "es::s=" + std::to_string(s); }

std::string cohort_label(const PanelDataset& d, const char* prefix, int g, int s) {
  return std::string(prefix) + "::g=" + d.time_label(g) + "::s=" + std::to_string(s);
}

void require_reference_periods(const std::vector<int>& cohorts) {
  if (cohorts.empty())
    throw PanelError(ErrorCode::DegenerateDesign, "no treated units in the panel");
  if (cohorts.front() < 2)
    throw PanelError(ErrorCode::NoReferencePeriod,
                     "cohort adopting at period 1 has no pre-period (s = -1 unobservable)");
}

// Appends the pooled event-study columns (one per realized s across all
// treated cohorts).
void append_event_columns(const PanelDataset& d, DesignMatrix& X, int col_offset) {
  const std::vector<int> cohorts = treated_cohorts(d);
  std::vector<int> rel;
  for (int g : cohorts) {
    const std::vector<int> r = realized_rel_periods(g, d.n_periods());
    rel.insert(rel.end(), r.begin(), r.end());
  }
  std::sort(rel.begin(), rel.end());
  rel.erase(std::unique(rel.begin(), rel.end()), rel.end());

  for (int s : rel)
    X.cols.push_back({ColumnRole{RoleKind::EventTime, 0, s}, event_label(s)});
  for (int row = 0; row < d.n_obs(); ++row) {
    const AdoptionTime g = d.adoption(X.row_unit(row));
    if (g.is_never()) continue;
    const int s = X.row_period(row) - g.period();
    if (s == -1) continue;
    const auto it = std::lower_bound(rel.begin(), rel.end(), s);
    X.values(row, col_offset + static_cast<int>(it - rel.begin())) = 1.0;
  }
}

}  // namespace

DesignMatrix build_static(const PanelDataset& d) {
  DesignMatrix X = base_design(d, 1);
  X.cols.push_back({ColumnRole{RoleKind::StaticTreatment, 0, 0}, "treat"});
  int treated = 0;
  for (int row = 0; row < d.n_obs(); ++row) {
    const int w = treatment_indicator(d, X.row_unit(row), X.row_period(row));
    X.values(row, 0) = w;
    treated += w;
  }
  if (treated == 0 || treated == d.n_obs())
    throw PanelError(ErrorCode::DegenerateDesign,
                     treated == 0 ? "no treated observations" : "no untreated observations");
  return X;
}

DesignMatrix build_event_study(const PanelDataset& d) {
  const std::vector<int> cohorts = treated_cohorts(d);
  require_reference_periods(cohorts);

  std::vector<int> rel;
  for (int g : cohorts) {
    const std::vector<int> r = realized_rel_periods(g, d.n_periods());
    rel.insert(rel.end(), r.begin(), r.end());
  }
  std::sort(rel.begin(), rel.end());
  rel.erase(std::unique(rel.begin(), rel.end()), rel.end());

  DesignMatrix X = base_design(d, static_cast<int>(rel.size()));
  append_event_columns(d, X, 0);
  return X;
}

DesignMatrix build_saturated(const PanelDataset& d) {
  const std::vector<int> cohorts = treated_cohorts(d);
  require_reference_periods(cohorts);

  int n_cols = 0;
  for (int g : cohorts) n_cols += static_cast<int>(realized_rel_periods(g, d.n_periods()).size());

  DesignMatrix X = base_design(d, n_cols);
  std::vector<std::pair<int, int>> cell_of_col;  // (g, s) per column
  for (int g : cohorts)
    for (int s : realized_rel_periods(g, d.n_periods())) {
      X.cols.push_back({ColumnRole{RoleKind::CohortEventTime, g, s}, cohort_label(d, "sat", g, s)});
      cell_of_col.emplace_back(g, s);
    }

  for (int row = 0; row < d.n_obs(); ++row) {
    const AdoptionTime g = d.adoption(X.row_unit(row));
    if (g.is_never()) continue;
    const int s = X.row_period(row) - g.period();
    if (s == -1) continue;
    const auto it = std::find(cell_of_col.begin(), cell_of_col.end(), std::make_pair(g.period(), s));
    X.values(row, static_cast<int>(it - cell_of_col.begin())) = 1.0;
  }
  return X;
}

DesignMatrix build_interacted(const PanelDataset& d, std::optional<AdoptionTime> reference) {
  const std::vector<int> cohorts = treated_cohorts(d);
  require_reference_periods(cohorts);

  const AdoptionTime ref = reference.value_or(AdoptionTime::finite(cohorts.front()));
  if (ref.is_never() ||
      std::find(cohorts.begin(), cohorts.end(), ref.period()) == cohorts.end())
    throw PanelError(ErrorCode::UnknownCohort,
                     "reference cohort is not a treated cohort present in the data");

  std::vector<int> rel;
  for (int g : cohorts) {
    const std::vector<int> r = realized_rel_periods(g, d.n_periods());
    rel.insert(rel.end(), r.begin(), r.end());
  }
  std::sort(rel.begin(), rel.end());
  rel.erase(std::unique(rel.begin(), rel.end()), rel.end());
  const int n_event = static_cast<int>(rel.size());

  int n_dev = 0;
  for (int g : cohorts)
    if (g != ref.period()) n_dev += static_cast<int>(realized_rel_periods(g, d.n_periods()).size());

  DesignMatrix X = base_design(d, n_event + n_dev);
  append_event_columns(d, X, 0);

  std::vector<std::pair<int, int>> dev_of_col;
  for (int g : cohorts) {
    if (g == ref.period()) continue;
    for (int s : realized_rel_periods(g, d.n_periods())) {
      X.cols.push_back({ColumnRole{RoleKind::CohortDeviation, g, s}, cohort_label(d, "dev", g, s)});
      dev_of_col.emplace_back(g, s);
    }
  }
  for (int row = 0; row < d.n_obs(); ++row) {
    const AdoptionTime g = d.adoption(X.row_unit(row));
    if (g.is_never() || g == ref) continue;
    const int s = X.row_period(row) - g.period();
    if (s == -1) continue;
    const auto it = std::find(dev_of_col.begin(), dev_of_col.end(), std::make_pair(g.period(), s));
    X.values(row, n_event + static_cast<int>(it - dev_of_col.begin())) = 1.0;
  }
  return X;
}

CollinearityReport drop_collinear(const DesignMatrix& X, double tol) {
  CollinearityReport report;
  if (X.n_cols() == 0) {
    report.design = X;
    return report;
  }

  Eigen::MatrixXd demeaned(X.values.rows(), X.values.cols());
  for (int j = 0; j < X.n_cols(); ++j)
    demeaned.col(j) = demean_two_way(X.values.col(j), X.fe_unit, X.fe_time);

  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(demeaned);
  qr.setThreshold(tol);
  const int rank = static_cast<int>(qr.rank());

  std::vector<int> kept(qr.colsPermutation().indices().data(),
                        qr.colsPermutation().indices().data() + rank);
  std::sort(kept.begin(), kept.end());

  report.design.n_units = X.n_units;
  report.design.n_periods = X.n_periods;
  report.design.fe_unit = X.fe_unit;
  report.design.fe_time = X.fe_time;
  report.design.values.resize(X.values.rows(), rank);
  std::vector<char> is_kept(X.n_cols(), 0);
  for (int j = 0; j < rank; ++j) {
    report.design.values.col(j) = X.values.col(kept[j]);
    report.design.cols.push_back(X.cols[kept[j]]);
    is_kept[kept[j]] = 1;
  }
  for (int j = 0; j < X.n_cols(); ++j)
    if (!is_kept[j]) report.dropped.push_back(X.cols[j]);
  return report;
}

}  // namespace paneldiag

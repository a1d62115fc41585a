#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

#include "paneldiag/panel.hpp"

namespace paneldiag {

enum class RoleKind {
  StaticTreatment,   // w_it
  EventTime,         // relative-period indicator, pooled over cohorts
  CohortEventTime,   // cohort x relative-period cell indicator
  CohortDeviation,   // cohort-specific deviation from the pooled event study
};

struct ColumnRole {
  RoleKind kind = RoleKind::StaticTreatment;
  int cohort = 0;  // adoption period (1-based rank); meaningful for cohort-indexed kinds
  int rel = 0;     // relative period s = t - g; never -1

  friend bool operator==(const ColumnRole&, const ColumnRole&) = default;
};

struct DesignColumn {
  ColumnRole role;
  std::string label;  // "treat", "es::s=<k>", "sat::g=<c>::s=<k>", "dev::g=<c>::s=<k>"
};

// Regressor matrix over the full balanced panel, one row per (unit, period)
// in the dataset's row layout. Unit and time fixed effects are carried as
// group ids and absorbed by the solver, never materialized as dummies.
struct DesignMatrix {
  Eigen::MatrixXd values;           // n x p
  std::vector<DesignColumn> cols;   // size p
  std::vector<int> fe_unit;         // group id per row (unit index)
  std::vector<int> fe_time;         // group id per row (period - 1)
  int n_units = 0;
  int n_periods = 0;

  int rows() const { return static_cast<int>(values.rows()); }
  int n_cols() const { return static_cast<int>(values.cols()); }
  int row_unit(int row) const { return row / n_periods; }
  int row_period(int row) const { return row % n_periods + 1; }
};

// Eq-1 regressor: a single treatment-status column.
DesignMatrix build_static(const PanelDataset& d);

// Eq-2 regressors: one indicator per realized relative period s != -1,
// pooled across treated cohorts. Never-treated rows are zero everywhere.
DesignMatrix build_event_study(const PanelDataset& d);

// Eq-5 regressors: one indicator per treated cohort and realized relative
// period s != -1 of that cohort.
DesignMatrix build_saturated(const PanelDataset& d);

// Eq-6 regressors: pooled event-study columns plus per-cohort deviation
// columns for every treated cohort other than the reference. Spans the same
// column space as build_saturated. reference defaults to the earliest
// adoption time.
DesignMatrix build_interacted(const PanelDataset& d,
                              std::optional<AdoptionTime> reference = std::nullopt);

struct CollinearityReport {
  DesignMatrix design;               // surviving columns, original order
  std::vector<DesignColumn> dropped;
};

// Keeps a maximal subset of columns that is full rank after two-way
// demeaning, detected by rank-revealing QR with relative pivot threshold tol.
CollinearityReport drop_collinear(const DesignMatrix& X, double tol = 1e-9);

}  // namespace paneldiag

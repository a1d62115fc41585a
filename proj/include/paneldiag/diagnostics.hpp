#pragma once

#include <optional>
#include <vector>

#include "paneldiag/inference.hpp"
#include "paneldiag/panel.hpp"

namespace paneldiag {

enum class DynamicsMode {
  // R = I over post-treatment event-study coefficients, q = (tau_hat, ...):
  // the paper's formulation. q is an estimate treated as fixed, which makes
  // the test conservative; kept as the in-code default for fidelity.
  QAgainstTau,
  // Rows gamma_s - gamma_{s+1} = 0 over adjacent post coefficients. Fixed
  // (R, q), so the F null distribution applies as stated; recommended.
  AdjacentEquality,
};

struct EstimateRow {
  int cohort = 0;  // 0 for pooled coefficients
  int rel = 0;
  double estimate = 0.0;
  double se = 0.0;
};

struct DynamicsTestReport {
  double tau_hat = 0.0;
  std::vector<EstimateRow> gamma_post;  // post-treatment coefficients, s ascending
  WaldResult wald;
  DynamicsMode mode = DynamicsMode::QAgainstTau;
};

// Fits the static and event-study regressions and tests whether the
// post-treatment dynamic effects are flat at the static estimate.
DynamicsTestReport test_dynamics(const PanelDataset& d,
                                 DynamicsMode mode = DynamicsMode::QAgainstTau);

enum class HetScope {
  AllPeriods,  // every deviation coefficient, leads included (default)
  PostOnly,    // deviations with s >= 0 only
};

struct CohortHeterogeneityReport {
  std::vector<EstimateRow> common;         // pooled gamma_s
  std::vector<EstimateRow> deviations;     // delta_s^c, non-reference cohorts
  std::vector<EstimateRow> reconstructed;  // gamma_s + delta_s^c per (c, s); se from the saturated fit is not carried here
  WaldResult wald;                         // joint null: all deviations zero
  AdoptionTime reference_cohort = AdoptionTime::never();
  HetScope scope = HetScope::AllPeriods;
};

// Fits the common-plus-deviations regression and jointly tests the deviation
// block against zero. Requires at least two treated cohorts.
CohortHeterogeneityReport test_cohort_heterogeneity(
    const PanelDataset& d,
    std::optional<AdoptionTime> reference = std::nullopt,
    HetScope scope = HetScope::AllPeriods);

// Cohort-level event study from the saturated regression, with
// cluster-robust standard errors; one row per realized (cohort, s).
std::vector<EstimateRow> cohort_event_study(const PanelDataset& d);

}  // namespace paneldiag

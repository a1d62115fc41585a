#include "paneldiag/panel.hpp"

#include <algorithm>
#include <map>

namespace paneldiag {

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::UnbalancedPanel: return "UnbalancedPanel";
    case ErrorCode::DuplicateObservation: return "DuplicateObservation";
    case ErrorCode::InconsistentAdoption: return "InconsistentAdoption";
    case ErrorCode::IndexError: return "IndexError";
    case ErrorCode::SpecError: return "SpecError";
    case ErrorCode::DegenerateDesign: return "DegenerateDesign";
    case ErrorCode::NoReferencePeriod: return "NoReferencePeriod";
    case ErrorCode::UnknownCohort: return "UnknownCohort";
    case ErrorCode::ConvergenceFailure: return "ConvergenceFailure";
    case ErrorCode::RankDeficient: return "RankDeficient";
    case ErrorCode::EmptyDesign: return "EmptyDesign";
    case ErrorCode::TooLargeForOracle: return "TooLargeForOracle";
    case ErrorCode::NotEnoughPostPeriods: return "NotEnoughPostPeriods";
    case ErrorCode::NeedTwoCohorts: return "NeedTwoCohorts";
    case ErrorCode::TooManyFailures: return "TooManyFailures";
    case ErrorCode::TooFewClusters: return "TooFewClusters";
    case ErrorCode::AlignmentError: return "AlignmentError";
    case ErrorCode::SingularRestrictionCovariance: return "SingularRestrictionCovariance";
    case ErrorCode::RedundantRestrictions: return "RedundantRestrictions";
    case ErrorCode::UnknownScenario: return "UnknownScenario";
    case ErrorCode::ScenarioMismatch: return "ScenarioMismatch";
  }
  return "UnknownError";
}

PanelDataset::PanelDataset(std::vector<std::string> unit_labels,
                           std::vector<std::string> time_labels,
                           std::vector<double> outcomes,
                           std::vector<AdoptionTime> adoption)
    : unit_labels_(std::move(unit_labels)),
      time_labels_(std::move(time_labels)),
      outcomes_(std::move(outcomes)),
      adoption_(std::move(adoption)) {
  const size_t n = unit_labels_.size();
  const size_t t = time_labels_.size();
  if (n == 0 || t == 0)
    throw PanelError(ErrorCode::UnbalancedPanel, "panel has no units or no periods");
  if (outcomes_.size() != n * t)
    throw PanelError(ErrorCode::UnbalancedPanel,
                     "expected " + std::to_string(n * t) + " outcomes, got " +
                         std::to_string(outcomes_.size()));
  if (adoption_.size() != n)
    throw PanelError(ErrorCode::InconsistentAdoption, "one adoption time per unit required");
  for (const AdoptionTime& a : adoption_) {
    if (!a.is_never() && (a.period() < 1 || a.period() > static_cast<int>(t)))
      throw PanelError(ErrorCode::InconsistentAdoption,
                       "adoption period " + std::to_string(a.period()) + " outside 1.." +
                           std::to_string(t));
  }
}

const std::string& PanelDataset::time_label(int period) const {
  if (period < 1 || period > n_periods())
    throw PanelError(ErrorCode::IndexError, "period " + std::to_string(period) + " out of range");
  return time_labels_[period - 1];
}

int treatment_indicator(const PanelDataset& d, int unit, int period) {
  if (unit < 0 || unit >= d.n_units() || period < 1 || period > d.n_periods())
    throw PanelError(ErrorCode::IndexError, "treatment_indicator index out of range");
  const AdoptionTime g = d.adoption(unit);
  return (!g.is_never() && period >= g.period()) ? 1 : 0;
}

CohortSummary cohort_summary(const PanelDataset& d) {
  std::map<AdoptionTime, int> counts;
  for (int i = 0; i < d.n_units(); ++i) counts[d.adoption(i)]++;

  CohortSummary summary;
  for (const auto& [g, count] : counts) {
    summary.cohorts.emplace_back(g, count);
    if (g.is_never()) summary.has_never_treated = true;
  }
  return summary;  // map order: ascending, never-treated last
}

std::vector<int> treated_cohorts(const PanelDataset& d) {
  std::vector<int> cohorts;
  for (int i = 0; i < d.n_units(); ++i) {
    const AdoptionTime g = d.adoption(i);
    if (!g.is_never()) cohorts.push_back(g.period());
  }
  std::sort(cohorts.begin(), cohorts.end());
  cohorts.erase(std::unique(cohorts.begin(), cohorts.end()), cohorts.end());
  return cohorts;
}

}  // namespace paneldiag

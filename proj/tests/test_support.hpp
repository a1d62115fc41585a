#pragma once

// Shared helpers for the test suites: hand-built panels, a random-panel
// generator, and the nonparametric two-period difference-in-differences
// oracle used to cross-check the regression estimates.

#include <algorithm>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "paneldiag/panel.hpp"
#include "paneldiag/rng.hpp"

namespace paneldiag::testing {

// Builds a panel from per-unit rows: {adoption, outcomes over t = 1..T}.
inline PanelDataset make_panel(
    const std::vector<std::pair<AdoptionTime, std::vector<double>>>& units) {
  const int T = static_cast<int>(units.front().second.size());
  std::vector<std::string> unit_labels, time_labels;
  std::vector<double> outcomes;
  std::vector<AdoptionTime> adoption;
  for (size_t i = 0; i < units.size(); ++i) {
    unit_labels.push_back("u" + std::to_string(i + 1));
    adoption.push_back(units[i].first);
    outcomes.insert(outcomes.end(), units[i].second.begin(), units[i].second.end());
  }
  for (int t = 1; t <= T; ++t) time_labels.push_back(std::to_string(t));
  return PanelDataset(std::move(unit_labels), std::move(time_labels), std::move(outcomes),
                      std::move(adoption));
}

struct RandomPanelOptions {
  int min_units = 4;
  int max_units = 20;
  int min_periods = 3;
  int max_periods = 8;
  int max_cohorts = 3;
  bool force_two_cohorts = false;
  bool with_treatment_effects = true;
};

// Random balanced panel with at least one never-treated unit and every
// cohort inhabited; outcomes are additive fixed effects plus noise plus, by
// default, a random per-cohort effect curve.
inline PanelDataset random_panel(Rng& rng, const RandomPanelOptions& options = {}) {
  const int N = options.min_units +
                static_cast<int>(rng.below(options.max_units - options.min_units + 1));
  const int T = options.min_periods +
                static_cast<int>(rng.below(options.max_periods - options.min_periods + 1));

  int n_cohorts = 1 + static_cast<int>(rng.below(options.max_cohorts));
  if (options.force_two_cohorts) n_cohorts = std::max(n_cohorts, 2);
  n_cohorts = std::min(n_cohorts, T - 1);  // adoption times live in 2..T

  std::vector<int> adoptions;
  while (static_cast<int>(adoptions.size()) < n_cohorts) {
    const int g = 2 + static_cast<int>(rng.below(T - 1));
    if (std::find(adoptions.begin(), adoptions.end(), g) == adoptions.end())
      adoptions.push_back(g);
  }
  std::sort(adoptions.begin(), adoptions.end());

  // Guarantee one never-treated unit and one unit per cohort, then assign
  // the rest at random (never-treated group included).
  std::vector<int> group_of_unit(N);
  std::iota(group_of_unit.begin(), group_of_unit.end(), 0);
  for (int i = 0; i < N; ++i)
    group_of_unit[i] = i <= n_cohorts ? i : static_cast<int>(rng.below(n_cohorts + 1));
  rng.shuffle(group_of_unit);

  std::vector<double> cohort_effect(n_cohorts);
  for (double& e : cohort_effect)
    e = options.with_treatment_effects ? rng.normal(0.0, 2.0) : 0.0;

  std::vector<std::pair<AdoptionTime, std::vector<double>>> units(N);
  for (int i = 0; i < N; ++i) {
    const int group = group_of_unit[i];
    const bool treated = group < n_cohorts;
    units[i].first = treated ? AdoptionTime::finite(adoptions[group]) : AdoptionTime::never();
    const double alpha = rng.normal(0.0, 1.0);
    units[i].second.resize(T);
    for (int t = 1; t <= T; ++t) {
      double y = alpha + 0.3 * t + rng.normal(0.0, 1.0);
      if (treated && t >= adoptions[group])
        y += cohort_effect[group] * (1.0 + 0.2 * (t - adoptions[group]));
      units[i].second[t - 1] = y;
    }
  }
  return make_panel(units);
}

// Two-period difference-in-differences of means: the change for treated
// units minus the change for never-treated units.
inline double did_of_means(const PanelDataset& d) {
  double treated_delta = 0.0, control_delta = 0.0;
  int n_treated = 0, n_control = 0;
  for (int i = 0; i < d.n_units(); ++i) {
    const double delta = d.outcome(i, 2) - d.outcome(i, 1);
    if (d.adoption(i).is_never()) {
      control_delta += delta;
      n_control++;
    } else {
      treated_delta += delta;
      n_treated++;
    }
  }
  return treated_delta / n_treated - control_delta / n_control;
}

}  // namespace paneldiag::testing

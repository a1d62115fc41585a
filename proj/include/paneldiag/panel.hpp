#pragma once

#include <limits>
#include <string>
#include <vector>

#include "paneldiag/errors.hpp"

namespace paneldiag {

// First treatment period of a unit, 1-based, or never-treated. Never-treated
// sorts after every finite adoption time and compares unequal to all of them.
class AdoptionTime {
 public:
  static AdoptionTime finite(int g) { return AdoptionTime(g); }
  static AdoptionTime never() { return AdoptionTime(kNever); }

  bool is_never() const { return g_ == kNever; }
  // 1-based adoption period; only valid for finite adoption times.
  int period() const {
    if (is_never()) throw PanelError(ErrorCode::IndexError, "period() on never-treated adoption time");
    return g_;
  }

  friend bool operator==(const AdoptionTime&, const AdoptionTime&) = default;
  friend auto operator<=>(const AdoptionTime&, const AdoptionTime&) = default;

 private:
  static constexpr int kNever = std::numeric_limits<int>::max();
  explicit AdoptionTime(int g) : g_(g) {}
  int g_;
};

struct CohortSummary {
  // Distinct adoption times with unit counts, ascending, never-treated last.
  // The never-treated cohort is included so counts sum to the unit total.
  std::vector<std::pair<AdoptionTime, int>> cohorts;
  bool has_never_treated = false;
};

// Balanced long-format panel. Periods are normalized to ranks 1..T of the
// sorted raw time labels; raw unit and time labels are kept for reporting.
// Units are addressed by their 0-based position in units(); periods by their
// 1-based rank. Immutable after construction.
class PanelDataset {
 public:
  // outcomes is unit-major: value for (unit i, period t) at i * T + (t - 1).
  PanelDataset(std::vector<std::string> unit_labels,
               std::vector<std::string> time_labels,
               std::vector<double> outcomes,
               std::vector<AdoptionTime> adoption);

  int n_units() const { return static_cast<int>(unit_labels_.size()); }
  int n_periods() const { return static_cast<int>(time_labels_.size()); }
  int n_obs() const { return n_units() * n_periods(); }

  double outcome(int unit, int period) const {
    check_index(unit, period);
    return outcomes_[static_cast<size_t>(unit) * n_periods() + period - 1];
  }
  const std::vector<double>& outcomes() const { return outcomes_; }

  AdoptionTime adoption(int unit) const {
    check_unit(unit);
    return adoption_[unit];
  }

  const std::string& unit_label(int unit) const {
    check_unit(unit);
    return unit_labels_[unit];
  }
  // 1-based period rank -> raw label.
  const std::string& time_label(int period) const;

  // Row layout shared with DesignMatrix: row r = unit * T + (period - 1).
  int row_unit(int row) const { return row / n_periods(); }
  int row_period(int row) const { return row % n_periods() + 1; }

  friend bool operator==(const PanelDataset&, const PanelDataset&) = default;

 private:
  void check_unit(int unit) const {
    if (unit < 0 || unit >= n_units())
      throw PanelError(ErrorCode::IndexError, "unit index " + std::to_string(unit) + " out of range");
  }
  void check_index(int unit, int period) const {
    check_unit(unit);
    if (period < 1 || period > n_periods())
      throw PanelError(ErrorCode::IndexError, "period " + std::to_string(period) + " out of range");
  }

  std::vector<std::string> unit_labels_;
  std::vector<std::string> time_labels_;
  std::vector<double> outcomes_;
  std::vector<AdoptionTime> adoption_;
};

// w_it = 1(t >= g_i); 0 for never-treated units.
int treatment_indicator(const PanelDataset& d, int unit, int period);

CohortSummary cohort_summary(const PanelDataset& d);

// Adoption times of treated cohorts present in the data, ascending.
std::vector<int> treated_cohorts(const PanelDataset& d);

}  // namespace paneldiag

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "paneldiag/panel.hpp"

namespace paneldiag {

// Treatment-effect curve evaluated at the relative post-treatment period
// s >= 0; every kind evaluates to 0 for s < 0 (no anticipation).
struct EffectFunction {
  enum class Kind {
    Constant,     // level
    Linear,       // slope * (s + 1)
    LinearDecay,  // start * max(0, 1 - s / periods_to_zero)
    ConcaveLog,   // scale * log(s + 2)
    LogThenZero,  // scale * log(s + 2) for s < cutoff, then 0
    Convex,       // scale * ((s + 1) / (horizon + 1))^2
    Sinusoid,     // amplitude * sin(2 pi s / period + phase)
    Novelty,      // peak * exp(-decay * s)
  };

  Kind kind = Kind::Constant;
  double a = 0.0;  // level / slope / start / scale / amplitude / peak
  double b = 0.0;  // periods_to_zero / cutoff / horizon / period / decay
  double c = 0.0;  // phase

  double operator()(int s) const;

  static EffectFunction constant(double level);
  static EffectFunction linear(double slope);
  static EffectFunction linear_decay(double start, double periods_to_zero);
  static EffectFunction concave_log(double scale);
  static EffectFunction log_then_zero(double scale, double cutoff);
  static EffectFunction convex(double scale, double horizon);
  static EffectFunction sinusoid(double amplitude, double period, double phase);
  static EffectFunction novelty(double peak, double decay);

  friend bool operator==(const EffectFunction&, const EffectFunction&) = default;

  nlohmann::json to_json() const;
};

struct CohortSpec {
  int adoption = 2;      // 1-based period, in 2..T
  double share = 0.0;    // fraction of units
  EffectFunction effect;
};

struct DgpSpec {
  std::string name;
  int n_units = 300;
  int n_periods = 12;
  std::vector<CohortSpec> cohorts;
  double never_treated_share = 0.25;
  double unit_fe_sd = 1.0;
  double time_fe_sd = 0.5;
  double noise_sd = 1.0;
  std::uint64_t seed = 0;

  nlohmann::json to_json() const;
};

struct TruthRow {
  int cohort = 0;  // adoption period
  int rel = 0;     // s >= 0
  double effect = 0.0;
};

struct SimulatedPanel {
  PanelDataset panel;
  std::vector<TruthRow> truth;
};

// y_it = alpha_i + lambda_t + effect_{c(i)}(t - g_i) * w_it + eps_it, with
// cohort assignment shuffled across units by shares (largest-remainder
// counts). Bit-reproducible given spec.seed; draw order is fixed as
// assignment shuffle, unit effects, time effects, noise.
SimulatedPanel simulate_panel(const DgpSpec& spec);

// Named scenario catalog covering the single-cohort dynamics set and the
// multi-cohort heterogeneity set. All functional-form constants live in
// dgp.cpp next to the catalog.
DgpSpec scenario(const std::string& name);
std::vector<std::string> scenario_names();
nlohmann::json catalog_json();

}  // namespace paneldiag

#include "paneldiag/dgp.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "paneldiag/rng.hpp"

namespace paneldiag {

double EffectFunction::operator()(int s) const {
  if (s < 0) return 0.0;  // no anticipation
  switch (kind) {
    case Kind::Constant: return a;
    case Kind::Linear: return a * (s + 1);
    case Kind::LinearDecay: return a * std::max(0.0, 1.0 - s / b);
    case Kind::ConcaveLog: return a * std::log(s + 2.0);
    case Kind::LogThenZero: return s < b ? a * std::log(s + 2.0) : 0.0;
    case Kind::Convex: {
      const double u = (s + 1.0) / (b + 1.0);
      return a * u * u;
    }
    case Kind::Sinusoid: return a * std::sin(2.0 * M_PI * s / b + c);
    case Kind::Novelty: return a * std::exp(-b * s);
  }
  return 0.0;
}

EffectFunction EffectFunction::constant(double level) { return {Kind::Constant, level, 0, 0}; }
EffectFunction EffectFunction::linear(double slope) { return {Kind::Linear, slope, 0, 0}; }
EffectFunction EffectFunction::linear_decay(double start, double periods_to_zero) {
  return {Kind::LinearDecay, start, periods_to_zero, 0};
}
EffectFunction EffectFunction::concave_log(double scale) { return {Kind::ConcaveLog, scale, 0, 0}; }
EffectFunction EffectFunction::log_then_zero(double scale, double cutoff) {
  return {Kind::LogThenZero, scale, cutoff, 0};
}
EffectFunction EffectFunction::convex(double scale, double horizon) {
  return {Kind::Convex, scale, horizon, 0};
}
EffectFunction EffectFunction::sinusoid(double amplitude, double period, double phase) {
  return {Kind::Sinusoid, amplitude, period, phase};
}
EffectFunction EffectFunction::novelty(double peak, double decay) {
  return {Kind::Novelty, peak, decay, 0};
}

nlohmann::json EffectFunction::to_json() const {
  switch (kind) {
    case Kind::Constant: return {{"kind", "constant"}, {"level", a}};
    case Kind::Linear: return {{"kind", "linear"}, {"slope", a}};
    case Kind::LinearDecay:
      return {{"kind", "linear_decay"}, {"start", a}, {"periods_to_zero", b}};
    case Kind::ConcaveLog: return {{"kind", "concave_log"}, {"scale", a}};
    case Kind::LogThenZero: return {{"kind", "log_then_zero"}, {"scale", a}, {"cutoff", b}};
    case Kind::Convex: return {{"kind", "convex"}, {"scale", a}, {"horizon", b}};
    case Kind::Sinusoid:
      return {{"kind", "sinusoid"}, {"amplitude", a}, {"period", b}, {"phase", c}};
    case Kind::Novelty: return {{"kind", "novelty"}, {"peak", a}, {"decay", b}};
  }
  return {};
}

nlohmann::json DgpSpec::to_json() const {
  nlohmann::json cohort_list = nlohmann::json::array();
  for (const CohortSpec& c : cohorts)
    cohort_list.push_back(
        {{"adoption", c.adoption}, {"share", c.share}, {"effect", c.effect.to_json()}});
  return {{"name", name},
          {"n_units", n_units},
          {"n_periods", n_periods},
          {"cohorts", cohort_list},
          {"never_treated_share", never_treated_share},
          {"unit_fe_sd", unit_fe_sd},
          {"time_fe_sd", time_fe_sd},
          {"noise_sd", noise_sd},
          {"seed", seed}};
}

namespace {

void validate(const DgpSpec& spec) {
  if (spec.n_units < 1 || spec.n_periods < 2)
    throw PanelError(ErrorCode::SpecError, "need at least 1 unit and 2 periods");
  if (spec.unit_fe_sd < 0 || spec.time_fe_sd < 0 || spec.noise_sd < 0)
    throw PanelError(ErrorCode::SpecError, "standard deviations must be non-negative");
  double total = spec.never_treated_share;
  if (spec.never_treated_share < 0)
    throw PanelError(ErrorCode::SpecError, "never_treated_share must be non-negative");
  std::vector<int> seen;
  for (const CohortSpec& c : spec.cohorts) {
    if (c.share < 0) throw PanelError(ErrorCode::SpecError, "cohort shares must be non-negative");
    if (c.adoption < 2 || c.adoption > spec.n_periods)
      throw PanelError(ErrorCode::SpecError,
                       "adoption time " + std::to_string(c.adoption) + " outside 2..T");
    if (std::find(seen.begin(), seen.end(), c.adoption) != seen.end())
      throw PanelError(ErrorCode::SpecError, "duplicate cohort adoption time");
    seen.push_back(c.adoption);
    total += c.share;
  }
  if (std::fabs(total - 1.0) > 1e-9)
    throw PanelError(ErrorCode::SpecError, "cohort shares and never_treated_share must sum to 1");
}

// Largest-remainder apportionment of N units over the cohort shares
// (never-treated last). Deterministic: ties break on group order.
std::vector<int> group_counts(const DgpSpec& spec) {
  std::vector<double> shares;
  for (const CohortSpec& c : spec.cohorts) shares.push_back(c.share);
  shares.push_back(spec.never_treated_share);

  std::vector<int> counts(shares.size());
  std::vector<std::pair<double, size_t>> remainders;
  int assigned = 0;
  for (size_t i = 0; i < shares.size(); ++i) {
    const double exact = shares[i] * spec.n_units;
    counts[i] = static_cast<int>(std::floor(exact));
    assigned += counts[i];
    remainders.push_back({-(exact - counts[i]), i});
  }
  std::stable_sort(remainders.begin(), remainders.end());
  for (int i = 0; i < spec.n_units - assigned; ++i) counts[remainders[i].second]++;
  return counts;
}

}  // namespace

SimulatedPanel simulate_panel(const DgpSpec& spec) {
  validate(spec);
  const int N = spec.n_units;
  const int T = spec.n_periods;
  const int n_groups = static_cast<int>(spec.cohorts.size()) + 1;  // + never-treated

  std::vector<int> counts = group_counts(spec);
  std::vector<int> group_of_unit;
  group_of_unit.reserve(N);
  for (int g = 0; g < n_groups; ++g)
    group_of_unit.insert(group_of_unit.end(), counts[g], g);

  Rng rng(splitmix64(spec.seed));
  rng.shuffle(group_of_unit);

  std::vector<double> unit_fe(N), time_fe(T);
  for (int i = 0; i < N; ++i) unit_fe[i] = rng.normal(0.0, spec.unit_fe_sd);
  for (int t = 0; t < T; ++t) time_fe[t] = rng.normal(0.0, spec.time_fe_sd);

  std::vector<std::string> unit_labels(N), time_labels(T);
  for (int i = 0; i < N; ++i) unit_labels[i] = std::to_string(i + 1);
  for (int t = 0; t < T; ++t) time_labels[t] = std::to_string(t + 1);

  std::vector<AdoptionTime> adoption(N, AdoptionTime::never());
  std::vector<double> outcomes(static_cast<size_t>(N) * T);
  for (int i = 0; i < N; ++i) {
    const int group = group_of_unit[i];
    const bool treated = group < static_cast<int>(spec.cohorts.size());
    if (treated) adoption[i] = AdoptionTime::finite(spec.cohorts[group].adoption);
    for (int t = 1; t <= T; ++t) {
      double y = unit_fe[i] + time_fe[t - 1] + rng.normal(0.0, spec.noise_sd);
      if (treated) {
        const int s = t - spec.cohorts[group].adoption;
        if (s >= 0) y += spec.cohorts[group].effect(s);
      }
      outcomes[static_cast<size_t>(i) * T + t - 1] = y;
    }
  }

  SimulatedPanel sim{PanelDataset(std::move(unit_labels), std::move(time_labels),
                                  std::move(outcomes), std::move(adoption)),
                     {}};
  std::vector<CohortSpec> sorted = spec.cohorts;
  std::sort(sorted.begin(), sorted.end(),
            [](const CohortSpec& a, const CohortSpec& b) { return a.adoption < b.adoption; });
  for (const CohortSpec& c : sorted)
    for (int s = 0; s <= T - c.adoption; ++s) sim.truth.push_back({c.adoption, s, c.effect(s)});
  return sim;
}

// ---------------------------------------------------------------------------
// Scenario catalog. Every functional-form constant used in the simulation
// studies is fixed here; the effect magnitudes are calibrated against the
// acceptance bands (size near nominal, power against each alternative) at
// the default panel size.
// ---------------------------------------------------------------------------

namespace {

constexpr int kUnits = 300;
constexpr int kPeriods = 12;
constexpr int kSingleAdoption = 4;
constexpr int kAdoptions[3] = {4, 6, 8};
constexpr double kNeverShare = 0.25;
constexpr double kUnitFeSd = 1.0;
constexpr double kTimeFeSd = 0.5;
constexpr double kNoiseSd = 1.0;

// Effect-curve constants shared across scenarios.
constexpr double kConstantLevel = 2.0;
constexpr double kLinearSlope = 0.25;
constexpr double kLogScale = 1.0;
constexpr double kConvexScale = 2.0;
constexpr double kConvexHorizon = 8.0;
constexpr double kSinAmplitude = 1.5;
constexpr double kSinPeriod = 6.0;
constexpr double kNoveltyPeak = 2.5;
constexpr double kNoveltyDecay = 0.5;
constexpr double kDecayStart = 2.0;
constexpr double kDecayPeriods = 8.0;
constexpr double kLogZeroScale = 1.5;
constexpr double kLogZeroCutoff = 4.0;
constexpr double kSmallMultiplier = 1.25;  // "small" cohort differences
constexpr double kLargeMultiplier = 2.0;   // "large" cohort differences
constexpr double kGainsTopScale = 3.0;     // earliest cohort under selection on gains
constexpr double kActivityJump = 2.5;      // immediate effect for the earliest cohort

DgpSpec single_cohort(const std::string& name, EffectFunction effect) {
  DgpSpec spec;
  spec.name = name;
  spec.n_units = kUnits;
  spec.n_periods = kPeriods;
  spec.cohorts = {{kSingleAdoption, 1.0 - kNeverShare, effect}};
  spec.never_treated_share = kNeverShare;
  spec.unit_fe_sd = kUnitFeSd;
  spec.time_fe_sd = kTimeFeSd;
  spec.noise_sd = kNoiseSd;
  return spec;
}

DgpSpec multi_cohort(const std::string& name, EffectFunction first, EffectFunction second,
                     EffectFunction third) {
  DgpSpec spec;
  spec.name = name;
  spec.n_units = kUnits;
  spec.n_periods = kPeriods;
  const double share = (1.0 - kNeverShare) / 3.0;
  spec.cohorts = {{kAdoptions[0], share, first},
                  {kAdoptions[1], share, second},
                  {kAdoptions[2], share, third}};
  spec.never_treated_share = kNeverShare;
  spec.unit_fe_sd = kUnitFeSd;
  spec.time_fe_sd = kTimeFeSd;
  spec.noise_sd = kNoiseSd;
  return spec;
}

}  // namespace

DgpSpec scenario(const std::string& name) {
  using EF = EffectFunction;
  // Single-cohort dynamics set.
  if (name == "constant") return single_cohort(name, EF::constant(kConstantLevel));
  if (name == "linear") return single_cohort(name, EF::linear(kLinearSlope));
  if (name == "concave_log") return single_cohort(name, EF::concave_log(kLogScale));
  if (name == "convex") return single_cohort(name, EF::convex(kConvexScale, kConvexHorizon));
  if (name == "sinusoid") return single_cohort(name, EF::sinusoid(kSinAmplitude, kSinPeriod, 0.0));
  if (name == "novelty") return single_cohort(name, EF::novelty(kNoveltyPeak, kNoveltyDecay));
  if (name == "log_then_zero")
    return single_cohort(name, EF::log_then_zero(kLogZeroScale, kLogZeroCutoff));

  // Multi-cohort heterogeneity set.
  if (name == "homogeneous")
    return multi_cohort(name, EF::concave_log(kLogScale), EF::concave_log(kLogScale),
                        EF::concave_log(kLogScale));
  if (name == "heterogeneous")
    return multi_cohort(name, EF::linear_decay(kDecayStart, kDecayPeriods),
                        EF::log_then_zero(kLogZeroScale, kLogZeroCutoff),
                        EF::sinusoid(kSinAmplitude, kSinPeriod, 0.0));
  if (name == "concave_multiplier_small")
    return multi_cohort(name, EF::concave_log(kLogScale),
                        EF::concave_log(kLogScale * kSmallMultiplier),
                        EF::concave_log(kLogScale * kSmallMultiplier * kSmallMultiplier));
  if (name == "concave_multiplier_large")
    return multi_cohort(name, EF::concave_log(kLogScale),
                        EF::concave_log(kLogScale * kLargeMultiplier),
                        EF::concave_log(kLogScale * kLargeMultiplier * kLargeMultiplier));
  if (name == "selection_on_gains")
    return multi_cohort(name, EF::concave_log(kGainsTopScale),
                        EF::concave_log((kGainsTopScale + kLogScale) / 2.0),
                        EF::concave_log(kLogScale));
  if (name == "novelty_effects")
    return multi_cohort(name, EF::novelty(kNoveltyPeak, kNoveltyDecay),
                        EF::novelty(kNoveltyPeak, kNoveltyDecay),
                        EF::novelty(kNoveltyPeak, kNoveltyDecay));
  if (name == "activity_bias")
    return multi_cohort(name, EF::constant(kActivityJump), EF::concave_log(kLogScale),
                        EF::concave_log(kLogScale));

  throw PanelError(ErrorCode::UnknownScenario, "no scenario named '" + name + "'");
}

std::vector<std::string> scenario_names() {
  return {"constant",     "linear",        "concave_log",
          "convex",       "sinusoid",      "novelty",
          "log_then_zero", "homogeneous",  "heterogeneous",
          "concave_multiplier_small",      "concave_multiplier_large",
          "selection_on_gains",            "novelty_effects",
          "activity_bias"};
}

nlohmann::json catalog_json() {
  nlohmann::json catalog = nlohmann::json::array();
  for (const std::string& name : scenario_names()) catalog.push_back(scenario(name).to_json());
  return catalog;
}

}  // namespace paneldiag

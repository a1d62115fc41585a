#include "paneldiag/montecarlo.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>

#include "paneldiag/rng.hpp"

namespace paneldiag {

const char* test_kind_name(TestKind t) {
  return t == TestKind::Dynamics ? "dynamics" : "cohorts";
}

nlohmann::json MonteCarloReport::to_json() const {
  nlohmann::json j = {{"scenario", scenario},     {"test", test},
                      {"reps", reps},             {"alpha", alpha},
                      {"rejection_rate", rejection_rate}, {"mc_stderr", mc_stderr},
                      {"failures", failures},     {"seed", seed}};
  nlohmann::json values = nlohmann::json::array();
  for (double p : p_values) {
    if (std::isnan(p))
      values.push_back(nullptr);
    else
      values.push_back(p);
  }
  j["p_values"] = values;
  return j;
}

void MonteCarloReport::write_pvalues_csv(std::ostream& out) const {
  out << "rep,p_value\n";
  char buffer[32];
  for (size_t i = 0; i < p_values.size(); ++i) {
    if (std::isnan(p_values[i])) {
      out << i << ",NA\n";
    } else {
      std::snprintf(buffer, sizeof buffer, "%.17g", p_values[i]);
      out << i << ',' << buffer << '\n';
    }
  }
}

MonteCarloReport run_study_with(const StudyConfig& config,
                                const std::function<double(int)>& replication) {
  if (config.reps < 1) throw std::invalid_argument("run_study: reps must be >= 1");

  std::vector<double> p_values(config.reps, std::nan(""));
  std::string fatal;

  // Replication i is fully determined by substream_seed(seed, i), so the
  // schedule never changes the results, only the wall time. Failures stay
  // recorded per slot; retrying would bias the rejection rate.
  auto body = [&](int i) {
    try {
      p_values[i] = replication(i);
    } catch (const PanelError&) {
      // counted below
    }
  };

  if (config.jobs > 1) {
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) num_threads(config.jobs)
    for (int i = 0; i < config.reps; ++i) {
      try {
        body(i);
      } catch (const std::exception& e) {
#pragma omp critical
        fatal = e.what();
      }
    }
#else
    for (int i = 0; i < config.reps; ++i) body(i);
#endif
  } else {
    for (int i = 0; i < config.reps; ++i) body(i);
  }
  if (!fatal.empty()) throw std::runtime_error("replication failed: " + fatal);

  MonteCarloReport report;
  report.scenario = config.scenario;
  report.test = test_kind_name(config.test);
  report.reps = config.reps;
  report.alpha = config.alpha;
  report.seed = config.seed;
  report.p_values = std::move(p_values);

  int rejections = 0;
  for (double p : report.p_values) {
    if (std::isnan(p))
      report.failures++;
    else if (p <= config.alpha)
      rejections++;
  }
  if (report.failures * 100 > config.reps)
    throw PanelError(ErrorCode::TooManyFailures,
                     std::to_string(report.failures) + " of " + std::to_string(config.reps) +
                         " replications failed (limit 1%)");

  report.rejection_rate = static_cast<double>(rejections) / config.reps;
  report.mc_stderr =
      std::sqrt(report.rejection_rate * (1.0 - report.rejection_rate) / config.reps);
  return report;
}

MonteCarloReport run_study(const StudyConfig& config, const DgpSpec& spec) {
  if (config.test == TestKind::CohortHeterogeneity && spec.cohorts.size() < 2)
    throw PanelError(ErrorCode::ScenarioMismatch,
                     "cohort heterogeneity test needs a multi-cohort scenario");
  if (spec.cohorts.empty())
    throw PanelError(ErrorCode::ScenarioMismatch, "scenario has no treated cohorts");

  auto replication = [&config, spec](int i) {
    DgpSpec rep_spec = spec;
    rep_spec.seed = substream_seed(config.seed, static_cast<std::uint64_t>(i));
    const SimulatedPanel sim = simulate_panel(rep_spec);
    if (config.test == TestKind::Dynamics)
      return test_dynamics(sim.panel, config.mode).wald.p_f;
    return test_cohort_heterogeneity(sim.panel, std::nullopt, config.scope).wald.p_f;
  };
  return run_study_with(config, replication);
}

MonteCarloReport run_study(const StudyConfig& config) {
  return run_study(config, scenario(config.scenario));
}

}  // namespace paneldiag

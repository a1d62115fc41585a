#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "paneldiag/dgp.hpp"
#include "paneldiag/diagnostics.hpp"

namespace paneldiag {

enum class TestKind { Dynamics, CohortHeterogeneity };

const char* test_kind_name(TestKind t);

struct StudyConfig {
  std::string scenario;
  TestKind test = TestKind::Dynamics;
  int reps = 1000;
  double alpha = 0.05;
  std::uint64_t seed = 0;
  int jobs = 1;  // >1 runs the OpenMP path; results are identical either way
  DynamicsMode mode = DynamicsMode::QAgainstTau;
  HetScope scope = HetScope::AllPeriods;
};

struct MonteCarloReport {
  std::string scenario;
  std::string test;
  int reps = 0;
  double alpha = 0.05;
  double rejection_rate = 0.0;  // (# p <= alpha) / reps
  double mc_stderr = 0.0;       // sqrt(r (1 - r) / reps)
  std::vector<double> p_values; // by replication; NaN marks a failed rep
  int failures = 0;
  std::uint64_t seed = 0;

  nlohmann::json to_json() const;
  // rep,p_value rows; failed replications write NA.
  void write_pvalues_csv(std::ostream& out) const;
};

// Runs `reps` independent replications of (simulate, test) and aggregates
// p-values. Replication i simulates with substream_seed(seed, i), so the
// report does not depend on the parallelism degree. Failed replications are
// counted; more than 1% of them fails the whole run rather than biasing the
// rejection rate.
MonteCarloReport run_study(const StudyConfig& config);

// Same harness with an explicit scenario spec (config.scenario is ignored
// for simulation but still echoed in the report).
MonteCarloReport run_study(const StudyConfig& config, const DgpSpec& spec);

// Injection point for the replication body, used to exercise the failure
// accounting without a pathological DGP. Returns the p-value for rep i.
MonteCarloReport run_study_with(const StudyConfig& config,
                                const std::function<double(int)>& replication);

}  // namespace paneldiag

// Throughput benchmark for the Monte Carlo harness: the serial reference
// path (jobs = 1) against the OpenMP replication map, with a result-identity
// check so the comparison is apples to apples.

#include <chrono>
#include <cstdio>
#include <string>
#include <vector>

#include "paneldiag/montecarlo.hpp"

using namespace paneldiag;

namespace {

double run_timed(const StudyConfig& config, MonteCarloReport& report) {
  const auto start = std::chrono::steady_clock::now();
  report = run_study(config);
  const auto stop = std::chrono::steady_clock::now();
  return std::chrono::duration<double>(stop - start).count();
}

}  // namespace

int main(int argc, char** argv) {
  StudyConfig config;
  config.scenario = argc > 1 ? argv[1] : "heterogeneous";
  config.reps = argc > 2 ? std::atoi(argv[2]) : 200;
  config.seed = 20240915;

  // Heterogeneity test for multi-cohort scenarios, dynamics otherwise.
  const DgpSpec spec = scenario(config.scenario);
  config.test = spec.cohorts.size() < 2 ? TestKind::Dynamics : TestKind::CohortHeterogeneity;

  std::printf("scenario=%s test=%s reps=%d\n", config.scenario.c_str(),
              test_kind_name(config.test), config.reps);
  std::printf("%-8s %10s %12s %10s\n", "jobs", "seconds", "reps/sec", "speedup");

  MonteCarloReport serial;
  config.jobs = 1;
  const double serial_time = run_timed(config, serial);
  std::printf("%-8d %10.2f %12.1f %10s\n", 1, serial_time, config.reps / serial_time, "1.00x");

  for (int jobs : {2, 4, 8}) {
    config.jobs = jobs;
    MonteCarloReport parallel;
    const double time = run_timed(config, parallel);
    const bool identical = parallel.p_values == serial.p_values;
    std::printf("%-8d %10.2f %12.1f %9.2fx  %s\n", jobs, time, config.reps / time,
                serial_time / time, identical ? "(identical to serial)" : "(MISMATCH!)");
    if (!identical) return 1;
  }
  return 0;
}

#pragma once

#include <stdexcept>
#include <string>

namespace paneldiag {

// Every failure the library can raise, grouped by the CLI exit-code class
// that reports it (see tools/paneldiag_main.cpp).
enum class ErrorCode {
  // data validation (exit 3)
  ParseError,
  UnbalancedPanel,
  DuplicateObservation,
  InconsistentAdoption,
  IndexError,
  SpecError,
  // estimation (exit 4)
  DegenerateDesign,
  NoReferencePeriod,
  UnknownCohort,
  ConvergenceFailure,
  RankDeficient,
  EmptyDesign,
  TooLargeForOracle,
  NotEnoughPostPeriods,
  NeedTwoCohorts,
  TooManyFailures,
  // inference (exit 5)
  TooFewClusters,
  AlignmentError,
  SingularRestrictionCovariance,
  RedundantRestrictions,
  // usage (exit 2)
  UnknownScenario,
  ScenarioMismatch,
};

const char* error_code_name(ErrorCode code);

class PanelError : public std::runtime_error {
 public:
  PanelError(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace paneldiag

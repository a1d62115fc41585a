// paneldiag command-line front end: estimation, diagnostics, simulation and
// Monte Carlo studies over long-format panel CSVs. Machine-readable JSON on
// stdout; plot-ready CSV from the plotdata subcommand.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "paneldiag/csv.hpp"
#include "paneldiag/diagnostics.hpp"
#include "paneldiag/montecarlo.hpp"
#include "paneldiag/version.hpp"

using nlohmann::json;
using namespace paneldiag;

namespace {

int exit_class(ErrorCode code) {
  switch (code) {
    case ErrorCode::UnknownScenario:
    case ErrorCode::ScenarioMismatch:
      return 2;
    case ErrorCode::ParseError:
    case ErrorCode::UnbalancedPanel:
    case ErrorCode::DuplicateObservation:
    case ErrorCode::InconsistentAdoption:
    case ErrorCode::IndexError:
    case ErrorCode::SpecError:
      return 3;
    case ErrorCode::TooFewClusters:
    case ErrorCode::AlignmentError:
    case ErrorCode::SingularRestrictionCovariance:
    case ErrorCode::RedundantRestrictions:
      return 5;
    default:
      return 4;  // estimation
  }
}

json fingerprint(const PanelDataset& d) {
  const CohortSummary summary = cohort_summary(d);
  json cohorts = json::array();
  for (const auto& [g, count] : summary.cohorts)
    cohorts.push_back({{"cohort", g.is_never() ? "never" : d.time_label(g.period())},
                       {"count", count}});
  return {{"rows", d.n_obs()},
          {"units", d.n_units()},
          {"periods", d.n_periods()},
          {"cohorts", cohorts},
          {"has_never_treated", summary.has_never_treated}};
}

json wald_json(const WaldResult& w) {
  return {{"statistic", w.statistic}, {"m", w.m},         {"dof_denom", w.dof_denom},
          {"p_f", w.p_f},             {"p_chi2", w.p_chi2}};
}

json envelope(const std::string& command_echo, std::optional<json> input, json results,
              std::optional<std::uint64_t> seed = std::nullopt) {
  json env = {{"command", command_echo}, {"version", kVersion}, {"results", std::move(results)}};
  if (input) env["input"] = *input;
  if (seed) env["seed"] = *seed;
  return env;
}

void emit(const json& payload, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << payload.dump(2) << '\n';
  } else {
    std::ofstream out(out_path);
    if (!out) throw PanelError(ErrorCode::ParseError, "cannot open '" + out_path + "' for writing");
    out << payload.dump(2) << '\n';
  }
}

std::string truth_path_for(const std::string& panel_path) {
  const std::string suffix = ".csv";
  if (panel_path.size() > suffix.size() &&
      panel_path.compare(panel_path.size() - suffix.size(), suffix.size(), suffix) == 0)
    return panel_path.substr(0, panel_path.size() - suffix.size()) + ".truth.csv";
  return panel_path + ".truth.csv";
}

std::uint64_t resolve_seed(const CLI::Option* opt, std::uint64_t flag_value) {
  if (opt->count() > 0) return flag_value;
  if (const char* env = std::getenv("PANELDIAG_SEED")) return std::strtoull(env, nullptr, 10);
  return 0;
}

std::string label_of_cohort(const PanelDataset& d, int g) { return d.time_label(g); }

// ---------------------------------------------------------------------------
// estimate
// ---------------------------------------------------------------------------

json coefficients_json(const FitResult& fit) {
  json rows = json::array();
  for (size_t j = 0; j < fit.cols.size(); ++j) {
    json row = {{"label", fit.cols[j].label}, {"estimate", fit.coefficients[j]}};
    if (fit.has_vcov()) row["se"] = std::sqrt(fit.vcov(j, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

json run_estimate(const PanelDataset& d, const std::string& spec_name) {
  DesignMatrix raw;
  if (spec_name == "static")
    raw = build_static(d);
  else if (spec_name == "event")
    raw = build_event_study(d);
  else if (spec_name == "saturated")
    raw = build_saturated(d);
  else if (spec_name == "interacted")
    raw = build_interacted(d);
  else
    throw CLI::ValidationError("--spec", "unknown spec '" + spec_name + "'");

  const CollinearityReport pruned = drop_collinear(raw);
  FitResult fit_result = fit(d, pruned.design);
  attach_unit_cluster_vcov(fit_result, pruned.design);

  json dropped = json::array();
  for (const DesignColumn& col : pruned.dropped) dropped.push_back(col.label);
  return {{"spec", spec_name},
          {"n_obs", fit_result.n_obs},
          {"k_params", fit_result.k_params},
          {"n_clusters", fit_result.n_clusters},
          {"coefficients", coefficients_json(fit_result)},
          {"dropped", dropped}};
}

// ---------------------------------------------------------------------------
// diagnose
// ---------------------------------------------------------------------------

json run_diagnose(const PanelDataset& d, const std::string& which, const std::string& mode,
                  const std::string& scope, double alpha) {
  json results = {{"which", which}, {"alpha", alpha}};
  if (which == "dynamics") {
    const DynamicsMode m = mode == "adjacent" ? DynamicsMode::AdjacentEquality
                                              : DynamicsMode::QAgainstTau;
    const DynamicsTestReport report = test_dynamics(d, m);
    results["mode"] = mode;
    results["tau_hat"] = report.tau_hat;
    json gammas = json::array();
    for (const EstimateRow& row : report.gamma_post)
      gammas.push_back({{"label", "es::s=" + std::to_string(row.rel)},
                        {"s", row.rel},
                        {"estimate", row.estimate},
                        {"se", row.se}});
    results["gamma_post"] = gammas;
    results["wald"] = wald_json(report.wald);
    results["verdict"] = report.wald.reject_at(alpha) ? "reject" : "fail to reject";
  } else if (which == "cohorts") {
    const HetScope s = scope == "post" ? HetScope::PostOnly : HetScope::AllPeriods;
    const CohortHeterogeneityReport report = test_cohort_heterogeneity(d, std::nullopt, s);
    results["scope"] = scope;
    results["reference_cohort"] = label_of_cohort(d, report.reference_cohort.period());
    json common = json::array();
    for (const EstimateRow& row : report.common)
      common.push_back({{"label", "es::s=" + std::to_string(row.rel)},
                        {"s", row.rel},
                        {"estimate", row.estimate},
                        {"se", row.se}});
    json deviations = json::array();
    for (const EstimateRow& row : report.deviations)
      deviations.push_back(
          {{"label", "dev::g=" + label_of_cohort(d, row.cohort) + "::s=" + std::to_string(row.rel)},
           {"cohort", label_of_cohort(d, row.cohort)},
           {"s", row.rel},
           {"estimate", row.estimate},
           {"se", row.se}});
    json reconstructed = json::array();
    for (const EstimateRow& row : report.reconstructed)
      reconstructed.push_back(
          {{"label", "sat::g=" + label_of_cohort(d, row.cohort) + "::s=" + std::to_string(row.rel)},
           {"cohort", label_of_cohort(d, row.cohort)},
           {"s", row.rel},
           {"estimate", row.estimate}});
    results["common"] = common;
    results["deviations"] = deviations;
    results["reconstructed"] = reconstructed;
    results["wald"] = wald_json(report.wald);
    results["verdict"] = report.wald.reject_at(alpha) ? "reject" : "fail to reject";
  } else {
    throw CLI::ValidationError("--which", "expected 'dynamics' or 'cohorts'");
  }
  return results;
}

// ---------------------------------------------------------------------------
// plotdata
// ---------------------------------------------------------------------------

void plot_row(std::ostream& out, const std::string& series, double x, double y,
              std::optional<double> se = std::nullopt) {
  char buffer[128];
  if (se) {
    std::snprintf(buffer, sizeof buffer, "%s,%.17g,%.17g,%.17g,%.17g\n", series.c_str(), x, y,
                  y - 1.96 * *se, y + 1.96 * *se);
  } else {
    std::snprintf(buffer, sizeof buffer, "%s,%.17g,%.17g,,\n", series.c_str(), x, y);
  }
  out << buffer;
}

int parse_rel(const std::string& label) {
  const size_t pos = label.rfind("s=");
  return std::stoi(label.substr(pos + 2));
}

std::string parse_cohort(const std::string& label) {
  const size_t pos = label.find("g=");
  return label.substr(pos + 2, label.find("::", pos) - pos - 2);
}

void run_plotdata(const json& env, std::ostream& out) {
  out << "series,x,y,ci_low,ci_high\n";
  const std::string command = env.value("command", "");
  const json& results = env.at("results");

  auto coefficient_rows = [&](const json& rows) {
    for (const json& row : rows) {
      const std::string label = row.at("label");
      std::optional<double> se;
      if (row.contains("se")) se = row["se"].get<double>();
      if (label == "treat") {
        plot_row(out, "treat", 0, row.at("estimate"), se);
      } else if (label.rfind("es::", 0) == 0) {
        plot_row(out, "common", parse_rel(label), row.at("estimate"), se);
      } else if (label.rfind("sat::", 0) == 0) {
        plot_row(out, "g=" + parse_cohort(label), parse_rel(label), row.at("estimate"), se);
      } else if (label.rfind("dev::", 0) == 0) {
        plot_row(out, "dev g=" + parse_cohort(label), parse_rel(label), row.at("estimate"), se);
      }
    }
  };

  if (command.rfind("estimate", 0) == 0 || results.contains("coefficients")) {
    coefficient_rows(results.at("coefficients"));
    return;
  }
  if (results.contains("p_values")) {  // Monte Carlo report
    constexpr int kBins = 20;
    int counts[kBins] = {};
    for (const json& p : results.at("p_values")) {
      if (p.is_null()) continue;
      int bin = static_cast<int>(p.get<double>() * kBins);
      if (bin >= kBins) bin = kBins - 1;
      counts[bin]++;
    }
    for (int b = 0; b < kBins; ++b)
      plot_row(out, "pvalue_hist", (b + 0.5) / kBins, counts[b]);
    return;
  }
  if (results.contains("reconstructed")) {  // diagnose cohorts
    coefficient_rows(results.at("common"));
    for (const json& row : results.at("reconstructed"))
      plot_row(out, "g=" + row.at("cohort").get<std::string>(), row.at("s").get<int>(),
               row.at("estimate"));
    return;
  }
  if (results.contains("gamma_post")) {  // diagnose dynamics
    coefficient_rows(results.at("gamma_post"));
    plot_row(out, "tau", 0, results.at("tau_hat"));
    return;
  }
  throw PanelError(ErrorCode::ParseError, "input JSON is not a recognized envelope or report");
}

std::string join_args(int argc, char** argv) {
  std::string joined;
  for (int i = 0; i < argc; ++i) {
    if (i) joined += ' ';
    joined += argv[i];
  }
  return joined;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"panel-data TWFE diagnostics toolkit"};
  app.require_subcommand(1);

  std::string csv_path, out_path, in_path;
  CsvColumns columns;
  std::string spec_name = "static", which = "dynamics", mode = "qtau", scope = "all";
  std::string scenario_name, test_name = "dynamics";
  double alpha = 0.05;
  int reps = 1000, jobs = 1;
  std::uint64_t seed = 0;

  auto add_csv_options = [&](CLI::App* cmd) {
    cmd->add_option("--csv", csv_path, "input panel CSV")->required();
    cmd->add_option("--unit", columns.unit, "unit id column name");
    cmd->add_option("--time", columns.time, "time column name");
    cmd->add_option("--outcome", columns.outcome, "outcome column name");
    cmd->add_option("--cohort", columns.cohort, "adoption-time column name");
  };

  CLI::App* estimate = app.add_subcommand("estimate", "fit a panel regression");
  add_csv_options(estimate);
  estimate->add_option("--spec", spec_name, "static | event | saturated | interacted");
  estimate->add_option("--out", out_path, "write the JSON envelope here instead of stdout");

  CLI::App* diagnose = app.add_subcommand("diagnose", "run a specification test");
  add_csv_options(diagnose);
  diagnose->add_option("--which", which, "dynamics | cohorts");
  diagnose->add_option("--mode", mode, "dynamics mode: qtau | adjacent");
  diagnose->add_option("--scope", scope, "cohort-test scope: all | post");
  diagnose->add_option("--alpha", alpha, "test level");
  diagnose->add_option("--out", out_path, "write the JSON envelope here instead of stdout");

  CLI::App* simulate = app.add_subcommand("simulate", "write a simulated panel CSV");
  simulate->add_option("--scenario", scenario_name, "scenario name")->required();
  CLI::Option* sim_seed = simulate->add_option("--seed", seed, "RNG seed");
  simulate->add_option("--out", out_path, "panel CSV path")->required();

  CLI::App* mc = app.add_subcommand("mc", "Monte Carlo rejection-rate study");
  mc->add_option("--scenario", scenario_name, "scenario name")->required();
  mc->add_option("--test", test_name, "dynamics | cohorts");
  mc->add_option("--mode", mode, "dynamics mode: qtau | adjacent");
  mc->add_option("--scope", scope, "cohort-test scope: all | post");
  mc->add_option("--reps", reps, "replications");
  mc->add_option("--alpha", alpha, "test level");
  CLI::Option* mc_seed = mc->add_option("--seed", seed, "RNG seed");
  mc->add_option("--jobs", jobs, "parallel workers (1 = serial reference path)");
  mc->add_option("--out", out_path, "base path for <base>.report.json and <base>.pvalues.csv");

  CLI::App* plotdata = app.add_subcommand("plotdata", "flatten an envelope to plot-ready CSV");
  plotdata->add_option("--in", in_path, "envelope or report JSON")->required();
  plotdata->add_option("--out", out_path, "CSV path (stdout when omitted)");

  app.add_subcommand("scenarios", "dump the scenario catalog as JSON");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  const std::string echo = join_args(argc, argv);
  try {
    if (estimate->parsed()) {
      const PanelDataset d = load_csv(csv_path, columns);
      emit(envelope(echo, fingerprint(d), run_estimate(d, spec_name)), out_path);
    } else if (diagnose->parsed()) {
      const PanelDataset d = load_csv(csv_path, columns);
      emit(envelope(echo, fingerprint(d), run_diagnose(d, which, mode, scope, alpha)), out_path);
    } else if (simulate->parsed()) {
      const std::uint64_t use_seed = resolve_seed(sim_seed, seed);
      DgpSpec spec = scenario(scenario_name);
      spec.seed = use_seed;
      const SimulatedPanel sim = simulate_panel(spec);
      write_csv_file(sim.panel, out_path);
      const std::string truth_path = truth_path_for(out_path);
      {
        std::ofstream truth(truth_path);
        truth << "cohort,s,effect\n";
        char buffer[64];
        for (const TruthRow& row : sim.truth) {
          std::snprintf(buffer, sizeof buffer, "%d,%d,%.17g\n", row.cohort, row.rel, row.effect);
          truth << buffer;
        }
      }
      emit(envelope(echo, fingerprint(sim.panel),
                    {{"scenario", scenario_name},
                     {"panel_csv", out_path},
                     {"truth_csv", truth_path},
                     {"spec", spec.to_json()}},
                    use_seed),
           "");
    } else if (mc->parsed()) {
      StudyConfig config;
      config.scenario = scenario_name;
      if (test_name != "dynamics" && test_name != "cohorts")
        throw CLI::ValidationError("--test", "expected 'dynamics' or 'cohorts'");
      config.test = test_name == "dynamics" ? TestKind::Dynamics : TestKind::CohortHeterogeneity;
      config.reps = reps;
      config.alpha = alpha;
      config.seed = resolve_seed(mc_seed, seed);
      config.jobs = jobs;
      config.mode = mode == "adjacent" ? DynamicsMode::AdjacentEquality : DynamicsMode::QAgainstTau;
      config.scope = scope == "post" ? HetScope::PostOnly : HetScope::AllPeriods;

      const MonteCarloReport report = run_study(config);
      json results = report.to_json();
      results["scenario_spec"] = scenario(scenario_name).to_json();
      if (!out_path.empty()) {
        std::ofstream report_out(out_path + ".report.json");
        report_out << report.to_json().dump(2) << '\n';
        std::ofstream pvalues_out(out_path + ".pvalues.csv");
        report.write_pvalues_csv(pvalues_out);
        results["report_json"] = out_path + ".report.json";
        results["pvalues_csv"] = out_path + ".pvalues.csv";
      }
      emit(envelope(echo, std::nullopt, std::move(results), config.seed), "");
    } else if (plotdata->parsed()) {
      std::ifstream in(in_path);
      if (!in) throw PanelError(ErrorCode::ParseError, "cannot open '" + in_path + "'");
      json env = json::parse(in);
      if (out_path.empty()) {
        run_plotdata(env, std::cout);
      } else {
        std::ofstream out(out_path);
        if (!out)
          throw PanelError(ErrorCode::ParseError, "cannot open '" + out_path + "' for writing");
        run_plotdata(env, out);
      }
    } else {  // scenarios
      std::cout << catalog_json().dump(2) << '\n';
    }
  } catch (const CLI::ValidationError& e) {
    std::cout << json{{"error", {{"code", "Usage"}, {"message", e.what()}}}}.dump(2) << '\n';
    return 2;
  } catch (const PanelError& e) {
    std::cout << json{{"error", {{"code", error_code_name(e.code())}, {"message", e.what()}}}}
                     .dump(2)
              << '\n';
    return exit_class(e.code());
  } catch (const json::exception& e) {
    std::cout << json{{"error", {{"code", "ParseError"}, {"message", e.what()}}}}.dump(2) << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cout << json{{"error", {{"code", "Internal"}, {"message", e.what()}}}}.dump(2) << '\n';
    return 1;
  }
  return 0;
}

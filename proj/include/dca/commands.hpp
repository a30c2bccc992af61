#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "dca/analysis.hpp"
#include "dca/config.hpp"
#include "dca/csv.hpp"
#include "dca/integrator.hpp"
#include "dca/kernel.hpp"
#include "dca/state.hpp"

namespace dca {

enum ExitCode : int { exit_ok = 0, exit_config_error = 2, exit_integrator_failure = 3, exit_validation_failure = 4 };

/// Everything one integration produced.
struct SimulationOutcome {
  explicit SimulationOutcome(Projection p) : projection(std::move(p)) {}

  std::string case_name;
  double epsilon = 0.0;
  std::optional<double> lambda;
  KernelSpec kernel;
  Projection projection;
  double initial_weighted_norm = 0.0;
  /// One state per configured snapshot time.
  std::vector<State> snapshots;
  /// Moments at t = 0 and every integration time.
  MomentSeries moments;
  StepStats stats;
  HypothesisReport hypotheses;
  APrioriCheck a_priori;
  MomentBoundReport bounds;
  double wall_seconds = 0.0;

  const Grid& grid() const { return projection.state.grid; }
  /// Deterministic description used in CSV headers.
  Metadata header() const;
};

/// Snapshot times plus the moment sampling points, positive and strictly
/// increasing.
std::vector<double> integration_times(const RunConfig& cfg);

/// Project, discretize, integrate and collect diagnostics. Throws
/// IntegrationError or ConfigError.
SimulationOutcome run_simulation(const RunConfig& cfg, double epsilon, std::optional<double> lambda = std::nullopt);

/// Snapshot, exact-profile and moment CSVs plus metadata.txt under `dir`.
void write_simulation(const SimulationOutcome& run, const RunConfig& cfg, const std::filesystem::path& dir);

struct SweepRun {
  double epsilon = 0.0;
  std::optional<SimulationOutcome> outcome;
  std::string error;
};

struct SweepResult {
  std::vector<SweepRun> runs;
  /// One table per snapshot time; failed runs are absent from `rows`.
  std::vector<ConvergenceTable> tables;
  /// Table rows as written, including failed runs.
  std::vector<std::vector<ErrorTableRow>> csv_rows;
};

/// Run every epsilon of the ladder on `cfg.threads` workers and tabulate
/// the errors. Per-run failures are recorded, not thrown.
SweepResult run_sweep(const RunConfig& cfg);

int cmd_simulate(const RunConfig& cfg, std::ostream& log);
int cmd_sweep(const RunConfig& cfg, std::ostream& log);

}  // namespace dca

#include "dca/commands.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <ctime>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <thread>

#include "dca/exact.hpp"

namespace dca {

namespace {

std::string to_text(NegativityPolicy p) { return p == NegativityPolicy::clamp_tiny ? "clamp_tiny" : "reject"; }

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream out;
  out << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return out.str();
}

std::optional<ExactCase> closed_form_case(const RunConfig& cfg, std::optional<double> lambda) {
  if (!cfg.case_id()) return std::nullopt;
  // A kernel block that changes the kernel breaks the link to the exact solution.
  const KernelBlock& k = cfg.kernel;
  if (k.K || k.L || k.C || k.lambda) return std::nullopt;
  const ExactCase c = cfg.exact_case(lambda.value_or(cfg.lambda.value_or(1.0)));
  if (!has_closed_form(c)) return std::nullopt;
  return c;
}

std::string run_label(const std::string& prefix, double value) { return prefix + format_number(value); }

}  // namespace

Metadata SimulationOutcome::header() const {
  Metadata meta{
      {"case", case_name},
      {"kernel", kernel.describe()},
      {"epsilon", format_number(epsilon)},
      {"m", std::to_string(grid().size())},
      {"x_max", format_number(grid().x_max())},
      {"hypotheses", hypotheses.all_pass() ? "verified" : "hypotheses-unverified"},
      {"dust_number", format_number(projection.dust_number)},
      {"tail_number", format_number(projection.tail_number)},
      {"accepted", std::to_string(stats.accepted)},
      {"rejected", std::to_string(stats.rejected)},
      {"rhs_evals", std::to_string(stats.rhs_evals)},
      {"clamped_mass", format_number(stats.clamped_mass)},
  };
  if (lambda) meta.insert(meta.begin() + 2, {"lambda", format_number(*lambda)});
  return meta;
}

std::vector<double> integration_times(const RunConfig& cfg) {
  std::vector<double> times;
  for (double t : cfg.snapshot_times) {
    if (t > 0.0) times.push_back(t);
  }
  for (int k = 1; k <= cfg.moment_samples; ++k) times.push_back(cfg.t_max * k / cfg.moment_samples);
  times.push_back(cfg.t_max);
  std::sort(times.begin(), times.end());
  times.erase(std::unique(times.begin(), times.end()), times.end());
  return times;
}

SimulationOutcome run_simulation(const RunConfig& cfg, double epsilon, std::optional<double> lambda) {
  cfg.validate();
  const auto started = std::chrono::steady_clock::now();
  const KernelSpec spec = resolve_kernel(cfg, lambda);
  const InitialProfile profile = resolve_initial(cfg);

  Grid grid = [&] {
    try {
      return Grid(epsilon, cfg.x_max);
    } catch (const std::domain_error& e) {
      throw ConfigError(e.what(), 0, "epsilon");
    }
  }();
  SimulationOutcome out(project_initial(profile, grid, cfg.projection_panels));
  out.case_name = cfg.case_name;
  out.epsilon = epsilon;
  out.lambda = lambda;
  out.kernel = spec;
  if (!out.lambda && cfg.case_id() == CaseId::case2) out.lambda = spec.lambda();
  out.initial_weighted_norm = weighted_l1_norm(profile, cfg.x_max);
  out.hypotheses = probe_hypotheses(spec);

  const DiscreteKernel dk =
      discretize(spec, grid, DiscretizeOptions{cfg.kernel.rule, cfg.kernel.quad_points, cfg.kernel.force_dense});
  const std::vector<double> times = integration_times(cfg);
  const State& initial = out.projection.state;

  auto result = integrate(initial, dk, cfg.integrator, std::span<const double>(times));
  out.stats = result.stats;

  out.moments.record(initial, 0.0);
  for (std::size_t k = 0; k < times.size(); ++k) out.moments.record(result.snapshots[k], result.tracked_integral[k]);

  for (double t : cfg.snapshot_times) {
    if (t == 0.0) {
      out.snapshots.push_back(initial);
      continue;
    }
    const auto at = std::lower_bound(times.begin(), times.end(), t);
    out.snapshots.push_back(result.snapshots[std::size_t(at - times.begin())]);
  }

  out.a_priori = check_a_priori_bounds(out.moments, out.initial_weighted_norm);
  out.bounds = moment_diagnostics(out.moments, spec, cfg.integrator.rtol);
  out.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return out;
}

void write_simulation(const SimulationOutcome& run, const RunConfig& cfg, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  const Metadata header = run.header();
  const auto exact = closed_form_case(cfg, run.lambda);

  for (const State& snap : run.snapshots) {
    Metadata meta = header;
    meta.emplace_back("t", format_number(snap.t));
    std::ostringstream body;
    write_snapshot_csv(body, snap, meta);
    write_file(dir / ("snapshot_" + run_label("t", snap.t) + ".csv"), body.str());
    if (exact) {
      std::ostringstream ex;
      write_exact_csv(ex, *exact, snap.t, cfg.x_max, 2000, {{"case", cfg.case_name}, {"t", format_number(snap.t)}});
      write_file(dir / ("exact_" + run_label("t", snap.t) + ".csv"), ex.str());
    }
  }

  std::ostringstream moments;
  write_moments_csv(moments, run.moments, header);
  write_file(dir / "moments.csv", moments.str());

  Metadata meta = header;
  const auto& h = run.hypotheses;
  meta.emplace_back("probe_ch1", h.ch1_pass ? "pass" : "fail");
  meta.emplace_back("probe_ch2", h.ch2_pass ? "pass" : "fail");
  meta.emplace_back("probe_alpha", h.alpha_pass ? "pass" : "fail");
  meta.emplace_back("probe_beta", h.beta_pass ? "pass" : "fail");
  meta.emplace_back("rtol", format_number(cfg.integrator.rtol));
  meta.emplace_back("atol", format_number(cfg.integrator.atol));
  meta.emplace_back("negativity_policy", to_text(cfg.integrator.negativity_policy));
  meta.emplace_back("negativity_rejections", std::to_string(run.stats.negativity_rejections));
  meta.emplace_back("min_before_clamp", format_number(run.stats.min_before_clamp));
  meta.emplace_back("a_priori_bounds", run.a_priori.holds ? "hold" : "violated");
  meta.emplace_back("number_nonincreasing", run.bounds.number_nonincreasing ? "yes" : "no");
  meta.emplace_back("max_mass_drift", format_number(run.bounds.max_mass_drift));
  meta.emplace_back("riccati_blowup_time", format_number(run.bounds.riccati_blowup_time));
  meta.emplace_back("wall_seconds", format_number(run.wall_seconds));
  meta.emplace_back("written_at", utc_timestamp());
  std::ostringstream text;
  write_metadata(text, meta);
  write_file(dir / "metadata.txt", text.str());
}

int cmd_simulate(const RunConfig& cfg, std::ostream& log) {
  cfg.validate();
  std::vector<std::optional<double>> lambdas{cfg.lambda};
  const bool family = cfg.case_id() == CaseId::case2 && !cfg.lambda;
  if (family) lambdas.assign(cfg.lambda_list.begin(), cfg.lambda_list.end());

  int code = exit_ok;
  for (const auto& lambda : lambdas) {
    const auto dir = family ? cfg.output_dir / run_label("lambda_", *lambda) : cfg.output_dir;
    try {
      const SimulationOutcome run = run_simulation(cfg, cfg.epsilon, lambda);
      write_simulation(run, cfg, dir);
      log << "simulate " << cfg.case_name << " epsilon=" << format_number(cfg.epsilon);
      if (run.lambda) log << " lambda=" << format_number(*run.lambda);
      log << " m=" << run.grid().size() << " steps=" << run.stats.accepted << '/' << run.stats.rejected
          << " rhs_evals=" << run.stats.rhs_evals << " -> " << dir.string() << '\n';
      if (!run.hypotheses.all_pass()) log << "  note: hypotheses-unverified\n";
      if (!run.a_priori.holds) {
        log << "  a-priori moment bounds violated\n";
        code = std::max<int>(code, exit_validation_failure);
      }
    } catch (const IntegrationError& e) {
      log << "integrator failure at t=" << format_number(e.time()) << ": " << e.what()
          << " (accepted " << e.stats().accepted << ", rejected " << e.stats().rejected << ", rhs_evals "
          << e.stats().rhs_evals << ")\n";
      return exit_integrator_failure;
    }
  }
  return code;
}

SweepResult run_sweep(const RunConfig& cfg) {
  cfg.validate();
  if (cfg.epsilon_list.size() < 2) throw ConfigError("a sweep needs at least two epsilon values", 0, "epsilon_list");
  const auto exact = closed_form_case(cfg, std::nullopt);
  if (!exact) throw ConfigError("a sweep needs a case with a closed-form solution", 0, "case");

  SweepResult result;
  const std::size_t n = cfg.epsilon_list.size();
  result.runs.resize(n);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t k = next++; k < n; k = next++) {
      SweepRun& slot = result.runs[k];
      slot.epsilon = cfg.epsilon_list[k];
      try {
        slot.outcome = run_simulation(cfg, slot.epsilon);
      } catch (const std::exception& e) {
        slot.error = e.what();
      }
    }
  };
  {
    std::vector<std::jthread> pool;
    const std::size_t workers = std::min<std::size_t>(std::size_t(cfg.threads), n);
    for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(worker);
    worker();
  }

  for (std::size_t s = 0; s < cfg.snapshot_times.size(); ++s) {
    const double t = cfg.snapshot_times[s];
    ConvergenceTable table;
    table.t = t;
    std::vector<ErrorTableRow> rows;
    for (const SweepRun& run : result.runs) {
      ErrorTableRow row;
      row.epsilon = run.epsilon;
      row.t = t;
      if (!run.outcome) {
        row.failed = true;
        row.reason = run.error;
        row.E1 = row.order_cumulative = std::numeric_limits<double>::quiet_NaN();
        rows.push_back(row);
        continue;
      }
      const auto report = rel_l1_error(reconstruct(run.outcome->snapshots[s]), *exact, t, cfg.error_panels,
                                       cfg.measure_max);
      table.rows.push_back({run.epsilon, report.E1});
      row.E1 = report.E1;
      row.order_cumulative = std::numeric_limits<double>::quiet_NaN();
      if (table.rows.size() >= 2) {
        try {
          row.order_cumulative = estimate_order(table.rows);
        } catch (const std::invalid_argument&) {
        }
      }
      rows.push_back(row);
    }
    if (table.rows.size() >= 2) {
      try {
        table.order_estimate = estimate_order(table.rows);
      } catch (const std::invalid_argument&) {
      }
    }
    result.tables.push_back(std::move(table));
    result.csv_rows.push_back(std::move(rows));
  }
  return result;
}

int cmd_sweep(const RunConfig& cfg, std::ostream& log) {
  const SweepResult sweep = run_sweep(cfg);
  int code = exit_ok;
  for (const SweepRun& run : sweep.runs) {
    if (run.outcome) {
      write_simulation(*run.outcome, cfg, cfg.output_dir / run_label("eps_", run.epsilon));
    } else {
      log << "epsilon " << format_number(run.epsilon) << " failed: " << run.error << '\n';
      code = exit_integrator_failure;
    }
  }
  for (std::size_t s = 0; s < sweep.tables.size(); ++s) {
    const ConvergenceTable& table = sweep.tables[s];
    Metadata meta{{"case", cfg.case_name}, {"x_max", format_number(cfg.x_max)}, {"t", format_number(table.t)}};
    if (cfg.measure_max) meta.emplace_back("measure_max", format_number(*cfg.measure_max));
    meta.emplace_back("order_estimate", format_number(table.order_estimate));
    std::ostringstream body;
    write_error_table_csv(body, sweep.csv_rows[s], meta);
    write_file(cfg.output_dir / ("errors_" + run_label("t", table.t) + ".csv"), body.str());

    log << "t=" << format_number(table.t) << ':';
    for (const auto& row : table.rows) log << "  eps=" << format_number(row.epsilon) << " E1=" << format_number(row.E1);
    log << "  order=" << format_number(table.order_estimate) << '\n';
  }
  return code;
}

}  // namespace dca

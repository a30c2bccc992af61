// Acceptance suite: one PASS/FAIL line per criterion, INFO lines for
// supporting measurements. Exit status is nonzero if any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "dca/analysis.hpp"
#include "dca/commands.hpp"
#include "dca/quadrature.hpp"
#include "dca/rhs.hpp"
#include "oracle.hpp"

using namespace dca;

namespace {

// Pinned tolerances and windows.
constexpr unsigned oracle_seed = 20240917;
constexpr int oracle_instances = 1000;
constexpr double rhs_rel_tol = 1e-13;
constexpr double defect_tol = 1e-12;
constexpr double weak_form_tol = 1e-14;
constexpr double oracle_seconds = 10.0;
constexpr double order_lo = 0.7, order_hi = 1.5;
constexpr double dense_run_seconds = 600.0;
constexpr double lambda_identity_tol = 1e-12;
constexpr double boundary_cell_tol = 1e-8;
constexpr double mass_drift_tol = 1e-6;
constexpr double exact_self_check_tol = 1e-8;
constexpr double riccati_fraction = 0.8;
constexpr double rk4_step = 1e-4;
constexpr double rk4_rel_tol = 1e-5;

int failures = 0;

void report(bool ok, const std::string& id, const std::string& what) {
  if (!ok) ++failures;
  std::cout << (ok ? "PASS " : "FAIL ") << id << "  " << what << std::endl;
}

void info(const std::string& id, const std::string& what) { std::cout << "INFO " << id << "  " << what << std::endl; }

std::string num(double v) { return format_number(v); }

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

double rel_sup(const Eigen::VectorXd& a, const Eigen::VectorXd& b) { return oracle::compare(a, b).rel_discrepancy; }

struct OracleTotals {
  double worst_rhs = 0.0, worst_defect = 0.0, worst_weak = 0.0;
  double seconds = 0.0;
};

OracleTotals oracle_instances_run() {
  const KernelFunction unit{KernelFamily::constant, 1.0};
  const std::vector<std::pair<std::string, KernelSpec>> kernels{
      {"constant", KernelSpec::scaled(unit, 1.0)},
      {"product", KernelSpec::scaled({KernelFamily::product, 1.0}, 1.0)},
      {"sum", KernelSpec::scaled({KernelFamily::sum, 1.0}, 1.0)},
      {"lambda=0.5", KernelSpec::scaled(unit, 0.5)},
  };
  std::mt19937_64 rng(oracle_seed);
  std::uniform_int_distribution<int> cells(2, 32);
  std::uniform_real_distribution<double> eps_dist(0.02, 0.2), unit_dist(0.0, 1.0);

  OracleTotals out;
  const auto start = std::chrono::steady_clock::now();
  for (int n = 0; n < oracle_instances; ++n) {
    const KernelSpec& spec = kernels[std::size_t(n) % kernels.size()].second;
    const Grid g = Grid::with_cells(eps_dist(rng), cells(rng));
    Eigen::VectorXd c(g.size());
    for (Index k = 0; k < c.size(); ++k) c(k) = unit_dist(rng);
    const State s(g, c);
    const Eigen::VectorXd reference = oracle::naive_rhs(c, spec, g.epsilon());

    // every available path is held to the reference
    std::vector<DiscreteKernel> builds{discretize(spec, g)};
    if (builds[0].uniform()) builds.push_back(discretize(spec, g, {DiscretizationRule::point, 3, true}));
    for (const auto& dk : builds) {
      const Eigen::VectorXd Q = eval_rhs(s, dk);
      out.worst_rhs = std::max(out.worst_rhs, rel_sup(reference, Q));

      double sum_iQ = 0.0;
      for (Index k = 0; k < Q.size(); ++k) sum_iQ += double(k + 1) * Q(k);
      out.worst_defect = std::max(out.worst_defect, std::abs(sum_iQ - mass_defect_rate(s, dk)) / (1.0 + std::abs(sum_iQ)));

      Eigen::VectorXd phi(g.size() + 1);
      for (Index k = 0; k < phi.size(); ++k) phi(k) = double(k + 1);
      // sum_{i,j} j (K_ij + C_ij) c_i c_j bounds every term of the bracketed sums
      double scale = 0.0;
      for (Index i = 1; i <= g.size(); ++i) {
        for (Index j = 1; j <= g.size(); ++j) scale += double(j) * (dk.K_at(i, j) + dk.C_at(i, j)) * c(i - 1) * c(j - 1);
      }
      out.worst_weak = std::max(out.worst_weak, std::abs(weak_form_rate(c, dk, phi)) / scale);
    }
  }
  out.seconds = seconds_since(start);
  return out;
}

bool strictly_decreasing(const ConvergenceTable& t) {
  for (std::size_t k = 1; k < t.rows.size(); ++k) {
    if (!(t.rows[k].E1 < t.rows[k - 1].E1)) return false;
  }
  return true;
}

std::string describe(const ConvergenceTable& t) {
  std::string s;
  for (const auto& r : t.rows) s += "E1(" + num(r.epsilon) + ")=" + num(r.E1) + " ";
  return s + "order=" + num(t.order_estimate);
}

void convergence_lines(const std::string& id, const std::string& label, const SweepResult& sweep) {
  for (const auto& table : sweep.tables) {
    const bool ok = table.rows.size() == 3 && strictly_decreasing(table) && table.order_estimate >= order_lo &&
                    table.order_estimate <= order_hi;
    report(ok, id, label + " t=" + num(table.t) + ": strictly decreasing, order in [0.7, 1.5]; " + describe(table));
  }
}

bool number_nonincreasing(const SweepResult& sweep) {
  for (const auto& run : sweep.runs) {
    if (!run.outcome || !run.outcome->bounds.number_nonincreasing) return false;
  }
  return true;
}

std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace

int main() {
  std::cout << std::unitbuf;

  // C1-C3: oracle equivalence on seeded random small instances.
  const OracleTotals o = oracle_instances_run();
  info("C1-3", "seed " + std::to_string(oracle_seed) + ", " + std::to_string(oracle_instances) +
                   " instances, m in 2..32, kernels constant/product/sum/lambda=0.5, " + num(o.seconds) + " s");
  report(o.worst_rhs <= rhs_rel_tol && o.seconds < oracle_seconds, "C1",
         "rhs vs naive transcription: worst rel sup " + num(o.worst_rhs) + " <= 1e-13");
  report(o.worst_defect <= defect_tol && o.seconds < oracle_seconds, "C2",
         "mass-defect identity: worst " + num(o.worst_defect) + " <= 1e-12 (1 + |sum i Q_i|)");
  report(o.worst_weak <= weak_form_tol, "C3", "weak form with phi_i = i: worst " + num(o.worst_weak) + " <= 1e-14 scale");

  // C4: test case 1 on [0, 10], dense O(m^2) right-hand side.
  RunConfig case1;
  case1.kernel.force_dense = true;
  const SweepResult s1 = run_sweep(case1);
  convergence_lines("C4", "case1 [0,10]", s1);
  const double dense_seconds = s1.runs.back().outcome ? s1.runs.back().outcome->wall_seconds : 1e300;
  report(dense_seconds < dense_run_seconds, "C4", "eps=0.005 dense run (m=1999) took " + num(dense_seconds) + " s < 600 s");
  {
    RunConfig wide;
    wide.x_max = 30.0;
    wide.measure_max = 10.0;
    const SweepResult sw = run_sweep(wide);
    for (const auto& t : sw.tables) info("C4", "case1 on [0,30], error measured on [0,10], t=" + num(t.t) + ": " + describe(t));
  }

  // C5: test case 3.
  RunConfig case3;
  case3.case_name = "case3";
  const SweepResult s3 = run_sweep(case3);
  convergence_lines("C5", "case3 [0,10]", s3);
  {
    RunConfig fine = case3;
    fine.epsilon_list = {0.01, 0.005, 0.0025, 0.00125};
    fine.snapshot_times = {1.0};
    fine.t_max = 1.0;
    const SweepResult sf = run_sweep(fine);
    info("C5", "case3 t=1, finer ladder: " + describe(sf.tables[0]));
  }

  // C6: lambda family at eps = 0.005.
  {
    const double eps = 0.005;
    RunConfig fam;
    fam.case_name = "case2";
    const ExactCase exact{CaseId::case1};
    std::vector<double> lambdas{0.0, 0.5, 0.75, 1.0};
    std::vector<double> E;
    std::vector<SimulationOutcome> runs;
    for (double l : lambdas) {
      runs.push_back(run_simulation(fam, eps, l));
      E.push_back(rel_l1_error(reconstruct(runs.back().snapshots[0]), exact, 1.0).E1);
    }
    const SimulationOutcome c1 = run_simulation(RunConfig{}, eps);
    double worst = 0.0;
    for (std::size_t k = 0; k < c1.snapshots.size(); ++k) {
      worst = std::max(worst, rel_sup(c1.snapshots[k].c, runs[3].snapshots[k].c));
    }
    report(worst <= lambda_identity_tol, "C6", "lambda=1 vs case1: rel sup " + num(worst) + " <= 1e-12");

    RunConfig ohs = fam;
    ohs.kernel.K = KernelFamily::constant;
    ohs.kernel.C = KernelFamily::constant;
    ohs.kernel.C_scale = 0.0;
    const SimulationOutcome pure = run_simulation(ohs, eps);
    worst = 0.0;
    for (std::size_t k = 0; k < pure.snapshots.size(); ++k) {
      worst = std::max(worst, rel_sup(pure.snapshots[k].c, runs[0].snapshots[k].c));
    }
    report(worst <= lambda_identity_tol, "C6", "lambda=0 vs independent C=0 build: rel sup " + num(worst) + " <= 1e-12");

    const double lo = std::min(E[0], E[3]), hi = std::max(E[0], E[3]);
    const bool between = E[1] >= lo && E[1] <= hi && E[2] >= lo && E[2] <= hi;
    report(between, "C6", "t=1 distance to the lambda=1 exact solution: E(0)=" + num(E[0]) + " E(0.5)=" + num(E[1]) +
                              " E(0.75)=" + num(E[2]) + " E(1)=" + num(E[3]));
    bool nonincreasing = c1.bounds.number_nonincreasing && pure.bounds.number_nonincreasing;
    for (const auto& r : runs) nonincreasing = nonincreasing && r.bounds.number_nonincreasing;

    // C7: every trajectory above.
    nonincreasing = nonincreasing && number_nonincreasing(s1) && number_nonincreasing(s3);
    report(nonincreasing, "C7", "M0 nonincreasing (10 rtol slack) on all case1/case2/case3 trajectories");
  }

  // C8: interior mass conservation at eps = 0.01.
  {
    auto boundary_run = [](double x_max) {
      RunConfig cfg;
      cfg.x_max = x_max;
      cfg.snapshot_times.clear();
      for (int k = 0; k <= 250; ++k) cfg.snapshot_times.push_back(0.01 * k);
      cfg.snapshot_times.back() = 2.5;
      cfg.moment_samples = 0;
      return run_simulation(cfg, 0.01);
    };
    auto summarize = [](const SimulationOutcome& run) {
      double boundary = 0.0, drift = 0.0;
      const double m1_0 = run.moments.M1[0];
      for (const auto& s : run.snapshots) boundary = std::max(boundary, s.c(s.c.size() - 1));
      for (double m1 : run.moments.M1) drift = std::max(drift, std::abs(m1 - m1_0) / m1_0);
      return std::pair{boundary, drift};
    };
    const auto run10 = boundary_run(10.0);
    const auto [b10, d10] = summarize(run10);
    report(b10 < boundary_cell_tol && d10 <= mass_drift_tol, "C8",
           "case1 eps=0.01 [0,10], t<=2.5: max boundary cell " + num(b10) + " < 1e-8, mass drift " + num(d10) + " <= 1e-6");
    info("C8", "[0,10]: |Y1(t) - Y1(0) - int D| / Y1(0) max " + num(run10.bounds.max_mass_drift) +
                   " (boundary outflow fully accounted)");
    const auto run40 = boundary_run(40.0);
    const auto [b40, d40] = summarize(run40);
    info("C8", "[0,40]: max boundary cell " + num(b40) + ", mass drift " + num(d40));
  }

  // C9: closed-form self-checks.
  {
    const ExactCase c1{CaseId::case1};
    double worst_mass = 0.0;
    for (double t : {0.0, 1.0, 2.5}) {
      auto xf = [&](double x) { return x * *exact_solution(c1, t, x); };
      worst_mass = std::max(worst_mass, std::abs(simpson_piecewise(xf, 0.0, 80.0, {2.0 * t}, 8000) - 2.0));
    }
    const ExactCase c3{CaseId::case3, 3.0};
    double worst_number = 0.0;
    for (double t : {0.0, 1.0, 2.5}) {
      auto f = [&](double x) { return *exact_solution(c3, t, x); };
      const double edge = 3.0 * (1.0 + t);
      worst_number = std::max(worst_number, std::abs(simpson_piecewise(f, 0.0, 20.0, {edge}, 400) - 2.0 / (1.0 + t)));
    }
    report(worst_mass <= exact_self_check_tol, "C9",
           "case1 closed-form mass = 2 at t in {0,1,2.5}: worst deviation " + num(worst_mass));
    report(worst_number <= exact_self_check_tol, "C9",
           "case3 closed-form number = 2/(1+t) at t in {0,1,2.5}: worst deviation " + num(worst_number));
  }

  // C10: second-moment bound for K = C = xy.
  {
    RunConfig prod;
    prod.kernel.K = KernelFamily::product;
    prod.kernel.bounds.A1 = 1.0;
    prod.kernel.bounds.A2 = 1.0;
    const double eps = 0.02;
    const Grid g(eps, prod.x_max);
    const State s0 = project_initial(resolve_initial(prod), g).state;
    const double m1 = moment(s0, 1.0), m2 = moment(s0, 2.0), A = 2.0;
    const double t_star = std::log1p(m1 / (2.0 * m2)) / (A * m1);
    prod.t_max = riccati_fraction * t_star;
    prod.snapshot_times = {prod.t_max};
    prod.moment_samples = 40;
    const SimulationOutcome run = run_simulation(prod, eps);
    double tightest = 0.0;
    // at t = 0 the bound equals M2(0)
    for (std::size_t k = 1; k < run.moments.size(); ++k) {
      if (std::isfinite(run.bounds.riccati_bound[k])) {
        tightest = std::max(tightest, run.moments.M2[k] / run.bounds.riccati_bound[k]);
      }
    }
    report(run.bounds.second_moment_bounded, "C10",
           "K=C=xy, eps=0.02, t <= 0.8 t*=" + num(prod.t_max) + ": max M2/bound for t > 0 is " + num(tightest));
  }

  // C11: adaptive integrator against fixed-step RK4.
  {
    const RunConfig cfg;
    const Grid g(0.05, cfg.x_max);
    const auto dk = discretize(resolve_kernel(cfg), g);
    const State s0 = project_initial(resolve_initial(cfg), g).state;
    const std::vector<double> times{1.0};
    const auto adaptive = integrate(s0, dk, cfg.integrator, std::span<const double>(times));
    const State ref = oracle::rk4_reference(s0, dk, rk4_step, 1.0);
    const double d = rel_sup(ref.c, adaptive.snapshots[0].c);
    report(d <= rk4_rel_tol, "C11", "case1 eps=0.05 t=1, rtol 1e-6: adaptive vs RK4(h=1e-4) rel sup " + num(d));
  }

  // C12: repeated sweeps write identical CSV files.
  {
    const auto root = std::filesystem::temp_directory_path() / "dca_acceptance_determinism";
    std::filesystem::remove_all(root);
    bool same = true;
    std::size_t files = 0;
    for (const std::string c : {"case1", "case3"}) {
      RunConfig cfg;
      cfg.case_name = c;
      std::ostringstream sink;
      cfg.output_dir = root / c / "a";
      cfg.threads = 1;
      cmd_sweep(cfg, sink);
      cfg.output_dir = root / c / "b";
      cfg.threads = 3;
      cmd_sweep(cfg, sink);
      for (const auto& entry : std::filesystem::recursive_directory_iterator(root / c / "a")) {
        if (entry.path().extension() != ".csv") continue;
        const auto rel = std::filesystem::relative(entry.path(), root / c / "a");
        same = same && read_file(entry.path()) == read_file(root / c / "b" / rel);
        ++files;
      }
    }
    std::filesystem::remove_all(root);
    report(same && files > 0, "C12", "two sweeps (1 and 3 workers) wrote " + std::to_string(files) + " byte-identical CSV files");
  }

  std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria failed") << std::endl;
  return failures == 0 ? 0 : 1;
}

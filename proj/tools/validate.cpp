#include "validate.hpp"

#include <cmath>
#include <ostream>
#include <random>

#include "dca/csv.hpp"
#include "dca/rhs.hpp"
#include "oracle.hpp"

namespace dca {

namespace {

constexpr unsigned seed = 20240917;
constexpr int instances = 200;
constexpr double rhs_tolerance = 1e-13;
constexpr double defect_tolerance = 1e-12;
constexpr double weak_form_tolerance = 1e-14;

const char* mark(bool ok) { return ok ? "PASS" : "FAIL"; }

}  // namespace

int cmd_validate(const RunConfig& cfg, std::ostream& log) {
  cfg.validate();
  const KernelSpec spec = resolve_kernel(cfg, cfg.lambda);
  const HypothesisReport h = probe_hypotheses(spec);

  log << "kernel: " << spec.describe() << '\n';
  log << mark(h.symmetric_K && h.symmetric_C) << "  symmetry\n";
  log << mark(h.nonneg_K && h.nonneg_C) << "  nonnegativity\n";
  log << mark(h.ch1_pass) << "  CH1 sup K(x,y)/y decays (first " << format_number(h.ch1_profile.front()[1])
      << ", last " << format_number(h.ch1_profile.back()[1]) << ")\n";
  log << mark(h.ch2_pass) << "  CH2 sup C = " << format_number(h.ch2_sup) << " <= " << format_number(h.m_cal)
      << (h.m_cal_declared ? " (declared)\n" : " (inferred)\n");
  log << mark(h.alpha_pass) << "  DH1 min dK/dx = " << format_number(h.min_dK_dx) << '\n';
  log << mark(h.beta_pass) << "  DH2 min dC/dx = " << format_number(h.min_dC_dx) << '\n';
  if (!h.all_pass()) log << "note: hypotheses-unverified\n";

  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> cells(2, 32);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  double worst_rhs = 0.0, worst_defect = 0.0, worst_weak = 0.0;
  for (int n = 0; n < instances; ++n) {
    const int m = cells(rng);
    const double eps = 0.9 / (m + 1.0);  // keeps x_max < 1 so every kernel stays O(1)
    const Grid grid = Grid::with_cells(eps, m);
    Eigen::VectorXd c(grid.size());
    for (Index k = 0; k < c.size(); ++k) c(k) = unit(rng);
    const DiscreteKernel dk = discretize(spec, grid, {DiscretizationRule::point, 3, true});

    const State s(grid, c);
    const Eigen::VectorXd Q = eval_rhs(s, dk);
    worst_rhs = std::max(worst_rhs, oracle::compare(oracle::naive_rhs(c, spec, eps), Q).rel_discrepancy);

    double sum_iQ = 0.0;
    for (Index k = 0; k < Q.size(); ++k) sum_iQ += double(k + 1) * Q(k);
    worst_defect = std::max(worst_defect, std::abs(sum_iQ - mass_defect_rate(s, dk)) / (1.0 + std::abs(sum_iQ)));

    Eigen::VectorXd phi(grid.size() + 1);
    for (Index k = 0; k < phi.size(); ++k) phi(k) = double(k + 1);
    const double scale = std::pow(c.lpNorm<1>() * double(grid.size()), 2) * dk.K.cwiseAbs().maxCoeff();
    worst_weak = std::max(worst_weak, std::abs(weak_form_rate(c, dk, phi)) / std::max(scale, 1e-300));
  }

  const bool rhs_ok = worst_rhs <= rhs_tolerance;
  const bool defect_ok = worst_defect <= defect_tolerance;
  const bool weak_ok = worst_weak <= weak_form_tolerance;
  log << "oracle seed " << seed << ", " << instances << " instances\n";
  log << mark(rhs_ok) << "  rhs vs naive transcription, worst rel sup " << format_number(worst_rhs) << '\n';
  log << mark(defect_ok) << "  mass-defect identity, worst " << format_number(worst_defect) << '\n';
  log << mark(weak_ok) << "  weak form annihilates phi_i = i, worst " << format_number(worst_weak) << '\n';
  return rhs_ok && defect_ok && weak_ok ? 0 : 4;
}

}  // namespace dca

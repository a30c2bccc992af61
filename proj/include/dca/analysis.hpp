#pragma once

#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "dca/exact.hpp"
#include "dca/kernel.hpp"
#include "dca/state.hpp"

namespace dca {

/// Relative L1 distance between f_eps and the exact solution at one time.
struct ErrorReport {
  double epsilon = 0.0;
  double t = 0.0;
  double E1 = 0.0;
  double numerator = 0.0;    // ||f_exact - f_eps||_L1 on [0, x_max]
  double denominator = 0.0;  // ||f_exact||_L1 on [0, x_max]
};

/// `measure_max` defaults to the grid's x_max. Each constant piece of f_eps is
/// split at the kinks/jumps of f_exact and at the sign changes of
/// f_exact - c_i (located by bisection to 1e-10), then integrated by Simpson
/// on `panels` sub-panels.
ErrorReport rel_l1_error(const StepFunction& sf, const ExactCase& c, double t, int panels = 8,
                         std::optional<double> measure_max = std::nullopt);

struct ConvergenceRow {
  double epsilon = 0.0;
  double E1 = 0.0;
};

struct ConvergenceTable {
  double t = 0.0;
  std::vector<ConvergenceRow> rows;
  double order_estimate = std::numeric_limits<double>::quiet_NaN();
};

/// Least-squares slope of log E1 against log eps. Rows with non-positive or
/// non-finite error are skipped; throws if fewer than two remain.
double estimate_order(const std::vector<ConvergenceRow>& rows);

struct BoundViolation {
  double t = 0.0;
  std::string quantity;
  double value = 0.0;
  double bound = 0.0;
};

struct MomentBoundReport {
  /// Second-moment bound A M1 M2(0) e^{A M1 t} / (A M1 + 2 A M2(0) (1 - e^{A M1 t})),
  /// A = 2 max(A1, A2); NaN where the denominator is not positive or the
  /// constants were not declared.
  std::vector<double> riccati_bound;
  double riccati_blowup_time = std::numeric_limits<double>::infinity();
  /// sqrt(2 M0(0) / (K1 t)) as a bound on the mass M1(t); NaN at t = 0 or
  /// when K1 was not declared. Diagnostic only: it concerns the untruncated
  /// system.
  std::vector<double> gelation_envelope;

  bool number_nonincreasing = true;
  /// |Y1(t) - Y1(0) - int D| <= 100 rtol Y1(0) at every sample.
  bool mass_accounted = true;
  double max_mass_drift = 0.0;
  bool second_moment_bounded = true;
  bool gelation_envelope_holds = true;

  std::vector<BoundViolation> violations;

  bool ok() const noexcept { return number_nonincreasing && mass_accounted && second_moment_bounded; }
};

/// Moment checks on a trajectory. Moments are on the continuous scale and
/// the declared constants refer to the continuous kernels.
MomentBoundReport moment_diagnostics(const MomentSeries& series, const KernelSpec& spec, double rtol = 1e-6);

/// Number and mass of f_eps stay within the a-priori bounds
/// M0 <= ||f_in||_{0,1}, M1 <= 2 ||f_in||_{0,1}, ||f||_{0,1} = int (1+x) f.
struct APrioriCheck {
  bool holds = true;
  double max_number_ratio = 0.0;
  double max_mass_ratio = 0.0;
};

APrioriCheck check_a_priori_bounds(const MomentSeries& series, double initial_weighted_norm);

}  // namespace dca

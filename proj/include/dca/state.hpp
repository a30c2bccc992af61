#pragma once

#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "dca/grid.hpp"

namespace dca {

/// Concentrations c_i(t), i = 1..m, on a grid. c_0 = 0 is implicit.
template <typename Scalar>
struct BasicState {
  BasicGrid<Scalar> grid;
  Vector<Scalar> c;
  Scalar t = 0;

  BasicState(BasicGrid<Scalar> g, Vector<Scalar> values, Scalar time = 0)
      : grid(std::move(g)), c(std::move(values)), t(time) {
    if (c.size() != grid.size()) throw std::invalid_argument("state: length does not match grid");
  }
  explicit BasicState(BasicGrid<Scalar> g) : grid(std::move(g)), c(Vector<Scalar>::Zero(grid.size())) {}
};

using State = BasicState<double>;

/// A nonnegative initial density with the points where it jumps or kinks.
struct InitialProfile {
  std::string name;
  std::function<double(double)> f;
  std::vector<double> breakpoints;

  double operator()(double x) const { return f(x); }
};

/// Projected initial data plus what the projection could not represent.
struct Projection {
  State state;
  /// Number (integral of f) and mass (integral of x f) in [0, eps/2).
  double dust_number = 0.0, dust_mass = 0.0;
  /// Number and mass in [(m + 1/2) eps, x_max].
  double tail_number = 0.0, tail_mass = 0.0;
};

/// c_i = (1/eps) * integral of f over cell i, by composite Simpson with
/// `panels` panels per cell (split at the profile's breakpoints).
Projection project_initial(const InitialProfile& profile, const Grid& grid, int panels = 16);

/// Integral of (1 + x) f over [0, x_max].
double weighted_l1_norm(const InitialProfile& profile, double x_max, int panels = 64);

/// Piecewise-constant reconstruction f_eps of a state: value c_i on cell i,
/// zero outside [eps/2, (m + 1/2) eps).
template <typename Scalar>
struct BasicStepFunction {
  BasicGrid<Scalar> grid;
  Vector<Scalar> values;

  Scalar operator()(Scalar x) const {
    const auto cell = grid.cell_of(x);
    return cell ? values(*cell - 1) : Scalar(0);
  }
  Scalar integral() const { return grid.epsilon() * values.sum(); }
};

using StepFunction = BasicStepFunction<double>;

template <typename Scalar>
BasicStepFunction<Scalar> reconstruct(const BasicState<Scalar>& state) {
  return {state.grid, state.c};
}

/// Sum over cells of i^r c_i (the unscaled Y_r norm for nonnegative c).
template <typename Scalar>
Scalar weighted_sum(const Vector<Scalar>& c, Scalar r) {
  using std::pow;
  Scalar acc = 0;
  for (Index k = 0; k < c.size(); ++k) {
    const Scalar i = Scalar(k + 1);
    const Scalar w = r == Scalar(0) ? Scalar(1) : r == Scalar(1) ? i : r == Scalar(2) ? i * i : pow(i, r);
    acc += w * c(k);
  }
  return acc;
}

/// Continuous moment of the step function at cell centres:
/// eps^{r+1} * sum_i i^r c_i. For r = 0, 1 this is exactly the integral of
/// x^r f_eps.
template <typename Scalar>
Scalar moment(const BasicState<Scalar>& state, Scalar r) {
  using std::pow;
  if (r < Scalar(0)) throw std::domain_error("moment: negative order");
  return pow(state.grid.epsilon(), r + Scalar(1)) * weighted_sum(state.c, r);
}

/// Time series of moments along a trajectory.
struct MomentSeries {
  double epsilon = 0.0;
  std::vector<double> times;
  std::vector<double> M0, M1, M2;
  std::vector<double> Y1;
  std::vector<double> N_count;
  /// Integral of the mass-defect rate (Y_1 units) from the initial time.
  std::vector<double> mass_defect_integral;

  void record(const State& state, double defect_integral);
  std::size_t size() const noexcept { return times.size(); }
};

}  // namespace dca

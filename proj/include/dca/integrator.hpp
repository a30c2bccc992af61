#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "dca/rhs.hpp"
#include "dca/state.hpp"

namespace dca {

enum class NegativityPolicy { clamp_tiny, reject };

struct IntegratorConfig {
  double rtol = 1e-6;
  double atol = 1e-10;
  /// Zero means "pick from the final time": 1e-4 t_final and t_final / 10.
  double h_init = 0.0;
  double h_max = 0.0;
  double safety = 0.9;
  long max_steps = 1'000'000;
  NegativityPolicy negativity_policy = NegativityPolicy::clamp_tiny;

  void validate() const {
    if (!(rtol > 0.0) || !(atol > 0.0)) throw std::invalid_argument("integrator: tolerances must be positive");
    if (!(safety > 0.0 && safety < 1.0)) throw std::invalid_argument("integrator: safety must lie in (0, 1)");
    if (h_init < 0.0 || h_max < 0.0) throw std::invalid_argument("integrator: negative step bound");
    if (max_steps <= 0) throw std::invalid_argument("integrator: max_steps must be positive");
  }
};

struct StepStats {
  long accepted = 0;
  long rejected = 0;
  /// Steps rejected because the new state dipped below -10 atol
  /// (clamp_tiny) or below zero (reject); also counted in `rejected`.
  long negativity_rejections = 0;
  long rhs_evals = 0;
  /// Total of the slightly negative entries zeroed under clamp_tiny.
  double clamped_mass = 0.0;
  /// Most negative entry seen in an accepted step before clamping.
  double min_before_clamp = 0.0;
};

class IntegrationError : public std::runtime_error {
 public:
  IntegrationError(const std::string& what, StepStats stats, double t)
      : std::runtime_error(what), stats_(stats), t_(t) {}
  const StepStats& stats() const noexcept { return stats_; }
  double time() const noexcept { return t_; }

 private:
  StepStats stats_;
  double t_;
};

template <typename Scalar>
struct IntegrationResult {
  std::vector<BasicState<Scalar>> snapshots;
  /// Running integral of the tracked functional at each snapshot.
  std::vector<Scalar> tracked_integral;
  StepStats stats;
};

namespace dopri5 {
// Dormand-Prince 5(4) tableau.
inline constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
inline constexpr double a21 = 1.0 / 5;
inline constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
inline constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
inline constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
inline constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                        a65 = -5103.0 / 18656;
inline constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784, b6 = 11.0 / 84;
// Fifth- minus fourth-order weights.
inline constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                        e6 = 22.0 / 525, e7 = -1.0 / 40;
// PI controller exponents.
inline constexpr double alpha = 0.7 / 5, beta = 0.4 / 5;
}  // namespace dopri5

/// Adaptive Dormand-Prince 5(4) integration of dc/dt = rhs(c) from state0.t
/// through each of `times` (strictly increasing, first >= state0.t). Steps are
/// shortened to land exactly on every requested time.
///
/// `rhs(c, dcdt)` fills dcdt. `tracked(c)`, when given, is integrated along
/// the trajectory with the same stage weights as the solution.
template <typename Scalar, typename Rhs>
IntegrationResult<Scalar> integrate(const BasicState<Scalar>& state0, Rhs&& rhs, const IntegratorConfig& cfg,
                                    std::span<const double> times,
                                    const std::function<Scalar(const Vector<Scalar>&)>& tracked = {}) {
  using namespace dopri5;
  using std::abs;
  using std::max;
  using std::min;
  using std::pow;
  cfg.validate();

  IntegrationResult<Scalar> result;
  for (std::size_t k = 0; k < times.size(); ++k) {
    if (k == 0 ? !(times[0] >= double(state0.t)) : !(times[k] > times[k - 1])) {
      throw std::invalid_argument("integrator: snapshot times must be increasing and start at or after t0");
    }
  }
  if (times.empty()) return result;

  const Index m = state0.c.size();
  const double t_final = times.back();
  const double span = max(t_final - double(state0.t), std::numeric_limits<double>::min());
  const double h_max = cfg.h_max > 0.0 ? cfg.h_max : span / 10.0;
  double h = cfg.h_init > 0.0 ? cfg.h_init : 1e-4 * span;
  h = min(h, h_max);

  Vector<Scalar> y = state0.c, y_new(m), y_stage(m), err(m);
  Vector<Scalar> k1(m), k2(m), k3(m), k4(m), k5(m), k6(m), k7(m);
  double t = double(state0.t);
  Scalar integral = 0;
  StepStats& stats = result.stats;

  auto f = [&](const Vector<Scalar>& at, Vector<Scalar>& out) {
    rhs(at, out);
    ++stats.rhs_evals;
  };
  f(y, k1);

  double err_prev = 1e-4;
  bool last_rejected = false;
  long steps = 0;

  for (double target : times) {
    while (t < target) {
      if (++steps > cfg.max_steps) throw IntegrationError("integrator: max_steps exceeded", stats, t);
      bool lands = false;
      double step = h;
      if (t + 1.01 * step >= target) {
        step = target - t;
        lands = true;
      }
      if (step < 16.0 * std::numeric_limits<double>::epsilon() * max(abs(t), 1.0)) {
        throw IntegrationError("integrator: step size underflow", stats, t);
      }
      const Scalar hs = Scalar(step);

      // The second stage has zero weight, so `tracked` is skipped there.
      y_stage = y + hs * Scalar(a21) * k1;
      f(y_stage, k2);
      y_stage = y + hs * (Scalar(a31) * k1 + Scalar(a32) * k2);
      const Scalar g3 = tracked ? tracked(y_stage) : Scalar(0);
      f(y_stage, k3);
      y_stage = y + hs * (Scalar(a41) * k1 + Scalar(a42) * k2 + Scalar(a43) * k3);
      const Scalar g4 = tracked ? tracked(y_stage) : Scalar(0);
      f(y_stage, k4);
      y_stage = y + hs * (Scalar(a51) * k1 + Scalar(a52) * k2 + Scalar(a53) * k3 + Scalar(a54) * k4);
      const Scalar g5 = tracked ? tracked(y_stage) : Scalar(0);
      f(y_stage, k5);
      y_stage = y + hs * (Scalar(a61) * k1 + Scalar(a62) * k2 + Scalar(a63) * k3 + Scalar(a64) * k4 +
                          Scalar(a65) * k5);
      const Scalar g6 = tracked ? tracked(y_stage) : Scalar(0);
      f(y_stage, k6);
      y_new = y + hs * (Scalar(b1) * k1 + Scalar(b3) * k3 + Scalar(b4) * k4 + Scalar(b5) * k5 + Scalar(b6) * k6);
      f(y_new, k7);

      err = hs * (Scalar(e1) * k1 + Scalar(e3) * k3 + Scalar(e4) * k4 + Scalar(e5) * k5 + Scalar(e6) * k6 +
                  Scalar(e7) * k7);
      double err_norm = 0.0;
      for (Index q = 0; q < m; ++q) {
        const double scale = cfg.atol + cfg.rtol * max(double(abs(y(q))), double(abs(y_new(q))));
        err_norm = max(err_norm, double(abs(err(q))) / scale);
      }
      if (!std::isfinite(err_norm)) err_norm = std::numeric_limits<double>::infinity();

      if (err_norm > 1.0) {
        ++stats.rejected;
        const double fac = max(0.2, cfg.safety * pow(err_norm, -alpha));
        h = step * (std::isfinite(fac) ? fac : 0.2);
        last_rejected = true;
        continue;
      }

      const double min_value = m > 0 ? double(y_new.minCoeff()) : 0.0;
      const double floor_value = cfg.negativity_policy == NegativityPolicy::clamp_tiny ? -10.0 * cfg.atol : 0.0;
      if (min_value < floor_value) {
        ++stats.rejected;
        ++stats.negativity_rejections;
        h = 0.5 * step;
        last_rejected = true;
        if (cfg.negativity_policy == NegativityPolicy::reject && h < 1e-12 * span) {
          throw IntegrationError("integrator: state went negative beyond tolerance", stats, t);
        }
        continue;
      }

      ++stats.accepted;
      if (tracked) {
        const Scalar g1 = tracked(y);
        integral += hs * (Scalar(b1) * g1 + Scalar(b3) * g3 + Scalar(b4) * g4 + Scalar(b5) * g5 + Scalar(b6) * g6);
      }
      y.swap(y_new);
      k1.swap(k7);
      t = lands ? target : t + step;

      if (min_value < 0.0) {
        stats.min_before_clamp = min(stats.min_before_clamp, min_value);
        for (Index q = 0; q < m; ++q) {
          if (y(q) < Scalar(0)) {
            stats.clamped_mass += -double(y(q));
            y(q) = Scalar(0);
          }
        }
        f(y, k1);  // the stored derivative belonged to the unclamped state
      }

      double fac = err_norm == 0.0 ? 5.0 : cfg.safety * pow(err_norm, -alpha) * pow(err_prev, beta);
      fac = std::clamp(fac, 0.2, 5.0);
      if (last_rejected) fac = min(fac, 1.0);
      // A step shortened to land on a snapshot says little about the scale.
      const double base = lands ? max(step, h) : step;
      h = min(base * fac, h_max);
      err_prev = max(err_norm, 1e-4);
      last_rejected = false;
    }
    BasicState<Scalar> snap(state0.grid, y, Scalar(t));
    result.snapshots.push_back(std::move(snap));
    result.tracked_integral.push_back(integral);
  }
  return result;
}

/// Integrate the truncated system for a discrete kernel, tracking the
/// mass-defect rate.
template <typename Scalar>
IntegrationResult<Scalar> integrate(const BasicState<Scalar>& state0, const BasicDiscreteKernel<Scalar>& dk,
                                    const IntegratorConfig& cfg, std::span<const double> times,
                                    RhsPath path = RhsPath::automatic) {
  if (!(state0.grid == dk.grid)) throw std::invalid_argument("integrator: state and kernel are on different grids");
  RhsWorkspace<Scalar> ws;
  auto rhs = [&](const Vector<Scalar>& c, Vector<Scalar>& out) {
    eval_rhs(c, dk, ws, path);
    out = ws.Q;
  };
  std::function<Scalar(const Vector<Scalar>&)> defect = [&](const Vector<Scalar>& c) {
    return mass_defect_rate(c, dk);
  };
  return integrate(state0, rhs, cfg, times, defect);
}

}  // namespace dca

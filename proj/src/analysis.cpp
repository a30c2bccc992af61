#include "dca/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "dca/quadrature.hpp"

namespace dca {

namespace {

constexpr double root_tolerance = 1e-10;

// Integrals of |f - v| and f over [a, b], where f is smooth on [a, b].
struct PieceIntegrals {
  double abs_diff = 0.0;
  double exact = 0.0;
};

template <typename F>
PieceIntegrals integrate_smooth_piece(F&& f, double v, double a, double b, int panels) {
  PieceIntegrals out;
  if (b <= a) return out;
  const double nudge = 1e-12 * (b - a);
  auto g = [&](double x) { return f(std::clamp(x, a + nudge, b - nudge)) - v; };
  auto abs_g = [&](double x) { return std::abs(g(x)); };

  const double h = (b - a) / panels;
  for (int k = 0; k < panels; ++k) {
    double lo = a + k * h;
    const double hi = (k + 1 == panels) ? b : lo + h;
    const double g_lo = g(lo), g_hi = g(hi);
    if (g_lo * g_hi < 0.0) {
      double u = lo, w = hi, gu = g_lo;
      while (w - u > root_tolerance) {
        const double mid = 0.5 * (u + w);
        const double gm = g(mid);
        if ((gm < 0.0) == (gu < 0.0)) {
          u = mid;
          gu = gm;
        } else {
          w = mid;
        }
      }
      const double root = 0.5 * (u + w);
      out.abs_diff += simpson(abs_g, lo, root, 1) + simpson(abs_g, root, hi, 1);
    } else {
      out.abs_diff += simpson(abs_g, lo, hi, 1);
    }
    out.exact += simpson([&](double x) { return g(x) + v; }, lo, hi, 1);
  }
  return out;
}

}  // namespace

ErrorReport rel_l1_error(const StepFunction& sf, const ExactCase& c, double t, int panels,
                         std::optional<double> measure_max) {
  if (!has_closed_form(c)) throw std::invalid_argument("rel_l1_error: case has no closed form");
  if (panels < 1) throw std::domain_error("rel_l1_error: panels must be positive");
  const Grid& grid = sf.grid;
  const double x_end = measure_max.value_or(grid.x_max());
  const auto kinks = exact_breakpoints(c, t);
  auto f = [&](double x) { return *exact_solution(c, t, std::max(x, 0.0)); };

  ErrorReport report;
  report.epsilon = grid.epsilon();
  report.t = t;

  auto add_piece = [&](double a, double b, double v) {
    b = std::min(b, x_end);
    if (b <= a) return;
    std::vector<double> edges{a};
    for (double p : kinks) {
      if (p > a && p < b) edges.push_back(p);
    }
    edges.push_back(b);
    for (std::size_t k = 0; k + 1 < edges.size(); ++k) {
      const auto piece = integrate_smooth_piece(f, v, edges[k], edges[k + 1], panels);
      report.numerator += piece.abs_diff;
      report.denominator += piece.exact;
    }
  };

  add_piece(0.0, grid.left(1), 0.0);
  for (Index i = 1; i <= grid.size(); ++i) add_piece(grid.left(i), grid.right(i), sf.values(i - 1));
  add_piece(grid.upper(), std::max(x_end, grid.upper()), 0.0);

  if (!(report.denominator > 0.0)) throw std::runtime_error("rel_l1_error: exact solution has zero L1 norm");
  report.E1 = report.numerator / report.denominator;
  return report;
}

double estimate_order(const std::vector<ConvergenceRow>& rows) {
  std::vector<double> lx, ly;
  for (const auto& r : rows) {
    if (r.E1 > 0.0 && std::isfinite(r.E1) && r.epsilon > 0.0) {
      lx.push_back(std::log(r.epsilon));
      ly.push_back(std::log(r.E1));
    }
  }
  if (lx.size() < 2) throw std::invalid_argument("estimate_order: need at least two usable rows");
  const double n = double(lx.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t k = 0; k < lx.size(); ++k) {
    mx += lx[k];
    my += ly[k];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t k = 0; k < lx.size(); ++k) {
    sxy += (lx[k] - mx) * (ly[k] - my);
    sxx += (lx[k] - mx) * (lx[k] - mx);
  }
  if (!(sxx > 0.0)) throw std::invalid_argument("estimate_order: epsilons must differ");
  return sxy / sxx;
}

MomentBoundReport moment_diagnostics(const MomentSeries& series, const KernelSpec& spec, double rtol) {
  MomentBoundReport report;
  const std::size_t n = series.size();
  if (n == 0) return report;
  const double nan = std::numeric_limits<double>::quiet_NaN();
  const double t0 = series.times[0];
  const double slack = 10.0 * rtol;

  for (std::size_t k = 1; k < n; ++k) {
    if (series.M0[k] > series.M0[k - 1] * (1.0 + slack)) {
      report.number_nonincreasing = false;
      report.violations.push_back({series.times[k], "M0 increased", series.M0[k], series.M0[k - 1]});
    }
  }

  const double y1_0 = series.Y1[0];
  for (std::size_t k = 0; k < n; ++k) {
    const double drift = series.Y1[k] - y1_0 - series.mass_defect_integral[k];
    const double relative = y1_0 > 0.0 ? std::abs(drift) / y1_0 : std::abs(drift);
    report.max_mass_drift = std::max(report.max_mass_drift, relative);
    if (relative > 100.0 * rtol) {
      report.mass_accounted = false;
      report.violations.push_back({series.times[k], "Y1 drift beyond defect integral", relative, 100.0 * rtol});
    }
  }

  report.riccati_bound.assign(n, nan);
  const auto& b = spec.bounds;
  if (b.A1 && b.A2) {
    const double A = 2.0 * std::max(*b.A1, *b.A2);
    const double m1 = series.M1[0], m2 = series.M2[0];
    const double rate = A * m1;
    if (m2 > 0.0 && rate > 0.0) report.riccati_blowup_time = t0 + std::log1p(m1 / (2.0 * m2)) / rate;
    for (std::size_t k = 0; k < n; ++k) {
      const double growth = std::exp(rate * (series.times[k] - t0));
      const double denominator = rate + 2.0 * A * m2 * (1.0 - growth);
      if (!(denominator > 0.0)) continue;
      const double bound = rate * m2 * growth / denominator;
      report.riccati_bound[k] = bound;
      if (series.M2[k] > bound * (1.0 + slack)) {
        report.second_moment_bounded = false;
        report.violations.push_back({series.times[k], "M2 above second-moment bound", series.M2[k], bound});
      }
    }
  }

  report.gelation_envelope.assign(n, nan);
  if (b.K1 && *b.K1 > 0.0) {
    for (std::size_t k = 0; k < n; ++k) {
      const double dt = series.times[k] - t0;
      if (!(dt > 0.0)) continue;
      const double envelope = std::sqrt(2.0 * series.M0[0] / (*b.K1 * dt));
      report.gelation_envelope[k] = envelope;
      if (series.M1[k] > envelope) {
        report.gelation_envelope_holds = false;
        report.violations.push_back({series.times[k], "M1 above gelation envelope (diagnostic)", series.M1[k], envelope});
      }
    }
  }
  return report;
}

APrioriCheck check_a_priori_bounds(const MomentSeries& series, double initial_weighted_norm) {
  APrioriCheck check;
  if (!(initial_weighted_norm > 0.0)) return check;
  for (std::size_t k = 0; k < series.size(); ++k) {
    check.max_number_ratio = std::max(check.max_number_ratio, series.M0[k] / initial_weighted_norm);
    check.max_mass_ratio = std::max(check.max_mass_ratio, series.M1[k] / (2.0 * initial_weighted_norm));
  }
  // Simpson noise on the norm is far below this slack.
  check.holds = check.max_number_ratio <= 1.0 + 1e-9 && check.max_mass_ratio <= 1.0 + 1e-9;
  return check;
}

}  // namespace dca

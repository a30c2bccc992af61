#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace dca {

/// Composite Simpson rule with `panels` panels (each panel uses its midpoint).
template <typename F>
double simpson(F&& f, double a, double b, int panels) {
  if (b <= a) return 0.0;
  const double h = (b - a) / panels;
  double acc = 0.0;
  for (int k = 0; k < panels; ++k) {
    const double x0 = a + k * h;
    const double x1 = (k + 1 == panels) ? b : x0 + h;
    acc += (x1 - x0) / 6.0 * (f(x0) + 4.0 * f(0.5 * (x0 + x1)) + f(x1));
  }
  return acc;
}

/// Simpson on [a, b] split at every breakpoint strictly inside, so that
/// jumps and kinks of the integrand fall on panel edges.
template <typename F>
double simpson_piecewise(F&& f, double a, double b, const std::vector<double>& breakpoints,
                         int panels) {
  if (b <= a) return 0.0;
  std::vector<double> edges{a};
  for (double p : breakpoints) {
    if (p > a && p < b) edges.push_back(p);
  }
  edges.push_back(b);
  std::sort(edges.begin(), edges.end());
  double acc = 0.0;
  for (std::size_t k = 0; k + 1 < edges.size(); ++k) {
    // Piece endpoints are sampled a hair inside so one-sided limits are used.
    const double lo = edges[k], hi = edges[k + 1];
    const double nudge = 1e-12 * (hi - lo);
    auto inner = [&](double x) { return f(std::clamp(x, lo + nudge, hi - nudge)); };
    acc += simpson(inner, lo, hi, panels);
  }
  return acc;
}

}  // namespace dca

#include "dca/state.hpp"

#include <stdexcept>

#include "dca/quadrature.hpp"

namespace dca {

Projection project_initial(const InitialProfile& profile, const Grid& grid, int panels) {
  if (panels < 1) throw std::domain_error("projection: panels must be positive");
  const Index m = grid.size();
  const double eps = grid.epsilon();
  Vector<double> c(m);
  for (Index i = 1; i <= m; ++i) {
    const double integral =
        simpson_piecewise(profile.f, grid.left(i), grid.right(i), profile.breakpoints, panels);
    if (!std::isfinite(integral)) {
      throw std::runtime_error("projection: non-finite integral on cell " + std::to_string(i));
    }
    c(i - 1) = integral / eps;
  }

  auto x_f = [&](double x) { return x * profile(x); };
  Projection out{State(grid, std::move(c)), 0.0, 0.0, 0.0, 0.0};
  out.dust_number = simpson_piecewise(profile.f, 0.0, grid.left(1), profile.breakpoints, panels);
  out.dust_mass = simpson_piecewise(x_f, 0.0, grid.left(1), profile.breakpoints, panels);
  // The tail strip can be long when x_max is not a cell boundary; give it
  // the same resolution per unit length as the cells.
  const int tail_panels = panels * std::max(1, int(std::ceil((grid.x_max() - grid.upper()) / eps)));
  out.tail_number = simpson_piecewise(profile.f, grid.upper(), grid.x_max(), profile.breakpoints, tail_panels);
  out.tail_mass = simpson_piecewise(x_f, grid.upper(), grid.x_max(), profile.breakpoints, tail_panels);
  return out;
}

double weighted_l1_norm(const InitialProfile& profile, double x_max, int panels) {
  const auto weighted = [&](double x) { return (1.0 + x) * profile(x); };
  // Split the domain into unit pieces as well as at the breakpoints.
  std::vector<double> cuts = profile.breakpoints;
  for (double x = 1.0; x < x_max; x += 1.0) cuts.push_back(x);
  return simpson_piecewise(weighted, 0.0, x_max, cuts, panels);
}

void MomentSeries::record(const State& state, double defect_integral) {
  epsilon = state.grid.epsilon();
  times.push_back(state.t);
  M0.push_back(moment(state, 0.0));
  M1.push_back(moment(state, 1.0));
  M2.push_back(moment(state, 2.0));
  Y1.push_back(weighted_sum(state.c, 1.0));
  N_count.push_back(state.c.sum());
  mass_defect_integral.push_back(defect_integral);
}

}  // namespace dca

#include "oracle.hpp"

#include <cmath>
#include <stdexcept>

namespace dca::oracle {

OracleResult compare(const Eigen::VectorXd& reference, const Eigen::VectorXd& fast) {
  if (reference.size() != fast.size()) throw std::invalid_argument("oracle: size mismatch");
  OracleResult r{reference, fast};
  double ref_sup = 0.0;
  for (Index k = 0; k < reference.size(); ++k) {
    r.abs_discrepancy = std::max(r.abs_discrepancy, std::abs(reference(k) - fast(k)));
    ref_sup = std::max(ref_sup, std::abs(reference(k)));
  }
  r.rel_discrepancy = ref_sup > 0.0 ? r.abs_discrepancy / ref_sup : r.abs_discrepancy;
  return r;
}

OracleResult compare(double reference, double fast) {
  return compare(Eigen::VectorXd::Constant(1, reference), Eigen::VectorXd::Constant(1, fast));
}

namespace {

template <typename Acc>
Eigen::VectorXd transcribe(const Eigen::VectorXd& c, const KernelSpec& spec, double eps, Acc* outflow = nullptr) {
  const Index m = c.size();
  auto Ke = [&](Index i, Index j) { return Acc(eps) * Acc(spec.K(eps * double(i), eps * double(j))); };
  auto Ce = [&](Index i, Index j) { return Acc(eps) * Acc(spec.C(eps * double(i), eps * double(j))); };
  auto cc = [&](Index i) { return i >= 1 && i <= m ? Acc(c(i - 1)) : Acc(0); };

  Eigen::VectorXd Q(m);
  for (Index i = 1; i <= m; ++i) {
    Acc gain = 0, loss = 0;
    // aggregation: i-1 grows by absorbing smaller-or-equal j
    for (Index j = 1; j <= i - 1; ++j) gain += cc(i - 1) * Acc(j) * Ke(i - 1, j) * cc(j);
    // inverse aggregation: i-1 receives mass from larger-or-equal j
    if (i >= 2) {
      for (Index j = i - 1; j <= m; ++j) gain += cc(i - 1) * Acc(j) * Ce(i - 1, j) * cc(j);
    }
    for (Index j = 1; j <= i; ++j) loss += cc(i) * Acc(j) * Ke(i, j) * cc(j);
    for (Index j = i; j <= m; ++j) loss += cc(i) * Ke(i, j) * cc(j);
    for (Index j = i; j <= m; ++j) loss += cc(i) * Acc(j) * Ce(i, j) * cc(j);
    for (Index j = 1; j <= i; ++j) loss += cc(i) * Ce(i, j) * cc(j);
    Q(i - 1) = double(gain - loss);
  }
  if (outflow) {
    Acc out = 0;
    for (Index j = 1; j <= m; ++j) out += cc(m) * Acc(j) * Ke(m, j) * cc(j);
    out += cc(m) * Acc(m) * Ce(m, m) * cc(m);
    *outflow = out;
  }
  return Q;
}

}  // namespace

Eigen::VectorXd naive_rhs(const Eigen::VectorXd& c, const KernelSpec& spec, double eps) {
  if (c.size() > naive_max_cells) throw std::length_error("naive_rhs: more than 64 cells");
  return transcribe<long double>(c, spec, eps);
}

Eigen::VectorXd direct_rhs(const Eigen::VectorXd& c, const KernelSpec& spec, double eps) {
  return transcribe<double>(c, spec, eps);
}

double direct_weak_form(const Eigen::VectorXd& c, const KernelSpec& spec, double eps, const Eigen::VectorXd& phi) {
  if (c.size() > naive_max_cells) throw std::length_error("direct_weak_form: more than 64 cells");
  if (phi.size() != c.size() + 1) throw std::invalid_argument("direct_weak_form: phi needs m + 1 entries");
  long double outflow = 0;
  const Eigen::VectorXd Q = transcribe<long double>(c, spec, eps, &outflow);
  long double total = 0;
  for (Index k = 0; k < c.size(); ++k) total += (long double)phi(k) * (long double)Q(k);
  total += (long double)phi(c.size()) * outflow;
  return double(total);
}

State rk4_reference(const State& state0, const RhsHook& rhs, double h, double t_end) {
  if (!(h > 0.0)) throw std::invalid_argument("rk4_reference: step must be positive");
  const double span = t_end - state0.t;
  if (span < 0.0) throw std::invalid_argument("rk4_reference: t_end before t0");
  const double steps = std::ceil(span / h * (1.0 - 1e-12));
  if (steps > 1e7) throw std::length_error("rk4_reference: more than 1e7 steps");

  const Index m = state0.c.size();
  Eigen::VectorXd y = state0.c, k1(m), k2(m), k3(m), k4(m);
  const long n = long(steps);
  for (long s = 0; s < n; ++s) {
    const double t = state0.t + s * h;
    const double dt = (s + 1 == n) ? t_end - t : h;
    rhs(y, k1);
    rhs(y + 0.5 * dt * k1, k2);
    rhs(y + 0.5 * dt * k2, k3);
    rhs(y + dt * k3, k4);
    y += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  return State(state0.grid, y, t_end);
}

State rk4_reference(const State& state0, const DiscreteKernel& dk, double h, double t_end) {
  RhsWorkspace<double> ws;
  return rk4_reference(
      state0,
      [&](const Eigen::VectorXd& c, Eigen::VectorXd& out) {
        eval_rhs(c, dk, ws);
        out = ws.Q;
      },
      h, t_end);
}

}  // namespace dca::oracle

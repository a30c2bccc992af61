#pragma once

#include <stdexcept>

#include "dca/kernel.hpp"
#include "dca/state.hpp"

namespace dca {

/// Per-cell sums of the truncated system, cell i at index i - 1:
///
///   F1_i = sum_{j<i}      j K_{i-1,j} c_j     F2_i = sum_{j>=i-1} j C_{i-1,j} c_j
///   E1_i = sum_{j<=i}     j K_{i,j} c_j  +  sum_{j>=i} K_{i,j} c_j
///   E2_i = sum_{j>=i}     j C_{i,j} c_j  +  sum_{j<=i} C_{i,j} c_j
///
///   Q_i  = c_{i-1} (F1_i + F2_i) - c_i (E1_i + E2_i),   c_0 = 0.
///
/// The kernels already carry the factor eps, so no further eps appears.
template <typename Scalar>
struct RhsWorkspace {
  Vector<Scalar> F1, F2, E1, E2, Q;

  // Row sums shared by the gain and loss terms.
  Vector<Scalar> jc;           // j c_j
  Vector<Scalar> growth_K;     // sum_{j<=i} j K_{i,j} c_j
  Vector<Scalar> depletion_K;  // sum_{j>=i} K_{i,j} c_j
  Vector<Scalar> growth_C;     // sum_{j>=i} j C_{i,j} c_j
  Vector<Scalar> depletion_C;  // sum_{j<=i} C_{i,j} c_j

  void resize(Index m) {
    for (auto* v : {&F1, &F2, &E1, &E2, &Q, &jc, &growth_K, &depletion_K, &growth_C, &depletion_C}) {
      v->resize(m);
    }
  }
};

enum class RhsPath { automatic, dense, uniform };

namespace detail {

template <typename Scalar>
void row_sums_dense(const Vector<Scalar>& c, const BasicDiscreteKernel<Scalar>& dk, RhsWorkspace<Scalar>& ws) {
  ws.growth_K.noalias() = dk.K.template triangularView<Eigen::Lower>() * ws.jc;
  ws.depletion_K.noalias() = dk.K.template triangularView<Eigen::Upper>() * c;
  ws.growth_C.noalias() = dk.C.template triangularView<Eigen::Upper>() * ws.jc;
  ws.depletion_C.noalias() = dk.C.template triangularView<Eigen::Lower>() * c;
}

// Uniform kernels: every row sum is a prefix or suffix sum, O(m) in total.
template <typename Scalar>
void row_sums_uniform(const Vector<Scalar>& c, const BasicDiscreteKernel<Scalar>& dk, RhsWorkspace<Scalar>& ws) {
  const Scalar k = *dk.uniform_K, g = *dk.uniform_C;
  const Index m = c.size();
  const Scalar number = c.sum(), mass = ws.jc.sum();
  Scalar prefix_c = 0, prefix_jc = 0;  // sums over j < i
  for (Index q = 0; q < m; ++q) {
    const Scalar below_c = prefix_c, below_jc = prefix_jc;
    prefix_c += c(q);
    prefix_jc += ws.jc(q);
    ws.growth_K(q) = k * prefix_jc;
    ws.depletion_K(q) = k * (number - below_c);
    ws.growth_C(q) = g * (mass - below_jc);
    ws.depletion_C(q) = g * prefix_c;
  }
}

}  // namespace detail

/// dc/dt of the truncated system. Result in ws.Q (and the F/E sums).
template <typename Scalar>
void eval_rhs(const Vector<Scalar>& c, const BasicDiscreteKernel<Scalar>& dk, RhsWorkspace<Scalar>& ws,
              RhsPath path = RhsPath::automatic) {
  const Index m = dk.grid.size();
  if (c.size() != m) throw std::invalid_argument("rhs: state and kernel are on different grids");
  if (ws.Q.size() != m) ws.resize(m);

  for (Index q = 0; q < m; ++q) ws.jc(q) = Scalar(q + 1) * c(q);

  const bool use_uniform =
      path == RhsPath::uniform || (path == RhsPath::automatic && dk.uniform() && !dk.dense());
  if (use_uniform) {
    if (!dk.uniform()) throw std::invalid_argument("rhs: uniform path needs uniform kernels");
    detail::row_sums_uniform(c, dk, ws);
  } else {
    if (!dk.dense()) throw std::invalid_argument("rhs: dense path needs kernel matrices");
    detail::row_sums_dense(c, dk, ws);
  }

  ws.F1(0) = 0;
  ws.F2(0) = 0;
  ws.F1.tail(m - 1) = ws.growth_K.head(m - 1);
  ws.F2.tail(m - 1) = ws.growth_C.head(m - 1);
  ws.E1 = ws.growth_K + ws.depletion_K;
  ws.E2 = ws.growth_C + ws.depletion_C;

  ws.Q(0) = -c(0) * (ws.E1(0) + ws.E2(0));
  ws.Q.tail(m - 1) = c.head(m - 1).cwiseProduct(ws.F1.tail(m - 1) + ws.F2.tail(m - 1)) -
                     c.tail(m - 1).cwiseProduct(ws.E1.tail(m - 1) + ws.E2.tail(m - 1));
}

template <typename Scalar>
Vector<Scalar> eval_rhs(const BasicState<Scalar>& state, const BasicDiscreteKernel<Scalar>& dk,
                        RhsPath path = RhsPath::automatic) {
  if (!(state.grid == dk.grid)) throw std::invalid_argument("rhs: state and kernel are on different grids");
  RhsWorkspace<Scalar> ws;
  eval_rhs(state.c, dk, ws, path);
  return ws.Q;
}

/// Rate at which the last cell transports content out of the grid:
/// c_m (sum_{j<=m} j K_{m,j} c_j + m C_{m,m} c_m).
template <typename Scalar>
Scalar boundary_outflow(const Vector<Scalar>& c, const BasicDiscreteKernel<Scalar>& dk) {
  const Index m = dk.grid.size();
  if (c.size() != m) throw std::invalid_argument("rhs: state and kernel are on different grids");
  Scalar growth = 0;
  for (Index j = 1; j <= m; ++j) growth += Scalar(j) * dk.K_at(m, j) * c(j - 1);
  const Scalar cm = c(m - 1);
  return cm * (growth + Scalar(m) * dk.C_at(m, m) * cm);
}

/// d/dt sum_i i c_i for the truncated system:
///   D = -(m+1) c_m sum_j j K_{m,j} c_j - m (m+1) C_{m,m} c_m^2.
/// Zero whenever the last cell is empty.
template <typename Scalar>
Scalar mass_defect_rate(const Vector<Scalar>& c, const BasicDiscreteKernel<Scalar>& dk) {
  return -Scalar(dk.grid.size() + 1) * boundary_outflow(c, dk);
}

template <typename Scalar>
Scalar mass_defect_rate(const BasicState<Scalar>& state, const BasicDiscreteKernel<Scalar>& dk) {
  if (!(state.grid == dk.grid)) throw std::invalid_argument("rhs: state and kernel are on different grids");
  return mass_defect_rate(state.c, dk);
}

/// Truncated weak form for a test sequence phi_1..phi_{m+1} (phi(k) holds phi_{k+1}):
///   sum_i sum_{j<=i} [j (phi_{i+1} - phi_i) - phi_j] K_{i,j} c_i c_j
/// + sum_i sum_{j>=i} [j (phi_{i+1} - phi_i) - phi_j] C_{i,j} c_i c_j.
/// Equals sum_i phi_i Q_i + phi_{m+1} * boundary_outflow.
template <typename Scalar>
Scalar weak_form_rate(const Vector<Scalar>& c, const BasicDiscreteKernel<Scalar>& dk, const Vector<Scalar>& phi) {
  const Index m = dk.grid.size();
  if (c.size() != m) throw std::invalid_argument("weak form: state and kernel are on different grids");
  if (phi.size() != m + 1) throw std::invalid_argument("weak form: phi needs m + 1 entries");
  Scalar total = 0;
  for (Index i = 1; i <= m; ++i) {
    const Scalar step = phi(i) - phi(i - 1);
    Scalar row = 0;
    for (Index j = 1; j <= i; ++j) {
      row += (Scalar(j) * step - phi(j - 1)) * dk.K_at(i, j) * c(j - 1);
    }
    for (Index j = i; j <= m; ++j) {
      row += (Scalar(j) * step - phi(j - 1)) * dk.C_at(i, j) * c(j - 1);
    }
    total += c(i - 1) * row;
  }
  return total;
}

}  // namespace dca

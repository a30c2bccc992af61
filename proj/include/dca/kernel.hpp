#pragma once

#include <array>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "dca/grid.hpp"

namespace dca {

enum class KernelFamily { constant, product, sum };

std::string_view to_string(KernelFamily family);
std::optional<KernelFamily> parse_kernel_family(std::string_view name);

/// Closed-form rate kernel: scale * {1, x*y, x+y}.
struct KernelFunction {
  KernelFamily family = KernelFamily::constant;
  double scale = 1.0;

  double operator()(double x, double y) const {
    switch (family) {
      case KernelFamily::constant: return scale;
      case KernelFamily::product: return scale * (x * y);
      case KernelFamily::sum: return scale * (x + y);
    }
    return 0.0;
  }
  bool is_uniform() const noexcept { return family == KernelFamily::constant; }
  std::string describe() const;
};

/// Optional constants a user declares about a kernel pair. A1, A2, K1, K2
/// refer to the continuous kernels: K <= A1 x y, C <= A2 x y, K >= K1 x y,
/// C >= K2 x y. alpha, beta bound the x-derivatives from below; m_cal bounds
/// C for large second argument.
struct DeclaredBounds {
  std::optional<double> alpha, beta;
  std::optional<double> m_cal;
  std::optional<double> A1, A2;
  std::optional<double> K1, K2;
};

/// Aggregation kernel K and inverse-aggregation kernel C. Either C is an
/// independent closed form or C = lambda * K.
class KernelSpec {
 public:
  static KernelSpec scaled(KernelFunction aggregation, double lambda);
  static KernelSpec independent(KernelFunction aggregation, KernelFunction inverse);

  double K(double x, double y) const;
  double C(double x, double y) const;

  const KernelFunction& aggregation() const noexcept { return K_; }
  /// The closed form behind C; only meaningful when lambda() is empty.
  const KernelFunction& inverse() const noexcept { return C_; }
  std::optional<double> lambda() const noexcept { return lambda_; }

  bool K_uniform() const noexcept { return K_.is_uniform(); }
  bool C_uniform() const noexcept { return lambda_ ? K_.is_uniform() : C_.is_uniform(); }

  std::string describe() const;

  DeclaredBounds bounds;

 private:
  KernelFunction K_;
  KernelFunction C_;
  std::optional<double> lambda_;
};

enum class DiscretizationRule { point, cell_average };

std::string_view to_string(DiscretizationRule rule);

struct DiscretizeOptions {
  DiscretizationRule rule = DiscretizationRule::point;
  int quad_points = 3;
  /// Materialize the matrices even when both kernels are uniform.
  bool force_dense = false;
};

/// Discrete kernels K^eps_{i,j}, C^eps_{i,j} on a grid. Entry (i-1, j-1)
/// holds the value for cells i, j; the factor eps is already included.
///
/// When both kernels are uniform (and dense storage was not forced) the
/// matrices are left empty and only uniform_K / uniform_C are set.
template <typename Scalar>
struct BasicDiscreteKernel {
  BasicGrid<Scalar> grid;
  Matrix<Scalar> K;
  Matrix<Scalar> C;
  DiscretizationRule rule = DiscretizationRule::point;
  std::optional<Scalar> uniform_K;
  std::optional<Scalar> uniform_C;

  bool dense() const noexcept { return K.size() != 0; }
  bool uniform() const noexcept { return uniform_K.has_value() && uniform_C.has_value(); }

  Scalar K_at(Index i, Index j) const { return dense() ? K(i - 1, j - 1) : *uniform_K; }
  Scalar C_at(Index i, Index j) const { return dense() ? C(i - 1, j - 1) : *uniform_C; }
};

using DiscreteKernel = BasicDiscreteKernel<double>;

namespace detail {

/// Gauss-Legendre nodes on [0, 1] with weights summing to one, q = 1..5.
struct UnitGaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};
UnitGaussRule unit_gauss_rule(int q);

}  // namespace detail

/// Fill K^eps, C^eps on the grid. Point rule: eps * K(eps i, eps j). Cell
/// average: (1/eps) times the integral over cell i x cell j, by a q x q
/// tensor Gauss-Legendre rule. With lambda set, C^eps = lambda * K^eps.
template <typename Scalar>
BasicDiscreteKernel<Scalar> discretize(const KernelSpec& spec, const BasicGrid<Scalar>& grid,
                                       const DiscretizeOptions& options = {}) {
  BasicDiscreteKernel<Scalar> dk{grid, {}, {}, options.rule, std::nullopt, std::nullopt};
  const Index m = grid.size();
  const Scalar eps = grid.epsilon();

  if (options.rule == DiscretizationRule::point) {
    auto point = [&](auto&& kernel, Index i, Index j) {
      return eps * Scalar(kernel(double(grid.center(i)), double(grid.center(j))));
    };
    if (spec.K_uniform()) dk.uniform_K = point([&](double x, double y) { return spec.K(x, y); }, 1, 1);
    if (spec.C_uniform()) {
      dk.uniform_C = spec.lambda() ? Scalar(*spec.lambda()) * *dk.uniform_K
                                   : point([&](double x, double y) { return spec.C(x, y); }, 1, 1);
    }
    if (dk.uniform() && !options.force_dense) return dk;

    dk.K.resize(m, m);
    for (Index j = 1; j <= m; ++j) {
      for (Index i = 1; i <= m; ++i) {
        dk.K(i - 1, j - 1) = point([&](double x, double y) { return spec.K(x, y); }, i, j);
      }
    }
    if (spec.lambda()) {
      dk.C = Scalar(*spec.lambda()) * dk.K;
    } else {
      dk.C.resize(m, m);
      for (Index j = 1; j <= m; ++j) {
        for (Index i = 1; i <= m; ++i) {
          dk.C(i - 1, j - 1) = point([&](double x, double y) { return spec.C(x, y); }, i, j);
        }
      }
    }
    return dk;
  }

  const auto gauss = detail::unit_gauss_rule(options.quad_points);
  auto cell_average = [&](auto&& kernel, Index i, Index j) {
    double acc = 0.0;
    const double h = double(eps);
    for (std::size_t a = 0; a < gauss.nodes.size(); ++a) {
      const double x = double(grid.left(i)) + h * gauss.nodes[a];
      for (std::size_t b = 0; b < gauss.nodes.size(); ++b) {
        const double y = double(grid.left(j)) + h * gauss.nodes[b];
        acc += gauss.weights[a] * gauss.weights[b] * kernel(x, y);
      }
    }
    // (1/eps) * eps^2 * mean value
    return Scalar(h * acc);
  };
  auto kfun = [&](double x, double y) { return spec.K(x, y); };
  auto cfun = [&](double x, double y) { return spec.C(x, y); };

  if (spec.K_uniform()) dk.uniform_K = cell_average(kfun, 1, 1);
  if (spec.C_uniform()) {
    dk.uniform_C = spec.lambda() ? Scalar(*spec.lambda()) * *dk.uniform_K : cell_average(cfun, 1, 1);
  }
  if (dk.uniform() && !options.force_dense) return dk;

  dk.K.resize(m, m);
  for (Index j = 1; j <= m; ++j) {
    for (Index i = j; i <= m; ++i) {
      dk.K(i - 1, j - 1) = cell_average(kfun, i, j);
      dk.K(j - 1, i - 1) = dk.K(i - 1, j - 1);
    }
  }
  if (spec.lambda()) {
    dk.C = Scalar(*spec.lambda()) * dk.K;
  } else {
    dk.C.resize(m, m);
    for (Index j = 1; j <= m; ++j) {
      for (Index i = j; i <= m; ++i) {
        dk.C(i - 1, j - 1) = cell_average(cfun, i, j);
        dk.C(j - 1, i - 1) = dk.C(i - 1, j - 1);
      }
    }
  }
  return dk;
}

/// Numeric probe of the growth hypotheses on a continuous kernel pair.
struct HypothesisReport {
  double R = 1.0;
  double y_probe_max = 0.0;
  int samples = 0;

  bool symmetric_K = true, symmetric_C = true;
  bool nonneg_K = true, nonneg_C = true;

  /// (y, sup_{x in [0,R]} K(x,y)/y) at geometrically spaced y in [R, y_probe_max].
  std::vector<std::array<double, 2>> ch1_profile;
  bool ch1_pass = false;

  /// Sampled sup of C over [0,R] x [R, y_probe_max] and the bound it is held to.
  double ch2_sup = 0.0;
  double m_cal = 1.0;
  bool m_cal_declared = false;
  bool ch2_pass = false;

  /// Sampled min of the forward x-difference quotients of K and C.
  double min_dK_dx = 0.0, min_dC_dx = 0.0;
  bool alpha_pass = true, beta_pass = true;

  bool all_pass() const noexcept {
    return symmetric_K && symmetric_C && nonneg_K && nonneg_C && ch1_pass && ch2_pass &&
           alpha_pass && beta_pass;
  }
};

HypothesisReport probe_hypotheses(const KernelSpec& spec, double R = 1.0, double y_probe_max = 1e4,
                                  int samples = 64);

}  // namespace dca

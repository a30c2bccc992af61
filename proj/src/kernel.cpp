#include "dca/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace dca {

std::string_view to_string(KernelFamily family) {
  switch (family) {
    case KernelFamily::constant: return "constant";
    case KernelFamily::product: return "product";
    case KernelFamily::sum: return "sum";
  }
  return "unknown";
}

std::optional<KernelFamily> parse_kernel_family(std::string_view name) {
  if (name == "constant") return KernelFamily::constant;
  if (name == "product") return KernelFamily::product;
  if (name == "sum") return KernelFamily::sum;
  return std::nullopt;
}

std::string_view to_string(DiscretizationRule rule) {
  return rule == DiscretizationRule::point ? "point" : "cell_average";
}

std::string KernelFunction::describe() const {
  std::ostringstream out;
  out << to_string(family) << "(" << scale << ")";
  return out.str();
}

KernelSpec KernelSpec::scaled(KernelFunction aggregation, double lambda) {
  if (!(lambda >= 0.0 && lambda <= 1.0)) throw std::domain_error("kernel: lambda must lie in [0, 1]");
  if (!(aggregation.scale >= 0.0)) throw std::domain_error("kernel: negative kernel scale");
  KernelSpec spec;
  spec.K_ = aggregation;
  spec.C_ = aggregation;
  spec.lambda_ = lambda;
  return spec;
}

KernelSpec KernelSpec::independent(KernelFunction aggregation, KernelFunction inverse) {
  if (!(aggregation.scale >= 0.0) || !(inverse.scale >= 0.0)) {
    throw std::domain_error("kernel: negative kernel scale");
  }
  KernelSpec spec;
  spec.K_ = aggregation;
  spec.C_ = inverse;
  return spec;
}

double KernelSpec::K(double x, double y) const {
  if (x < 0.0 || y < 0.0) throw std::domain_error("kernel: negative size argument");
  return K_(x, y);
}

double KernelSpec::C(double x, double y) const {
  if (x < 0.0 || y < 0.0) throw std::domain_error("kernel: negative size argument");
  return lambda_ ? *lambda_ * K_(x, y) : C_(x, y);
}

std::string KernelSpec::describe() const {
  std::ostringstream out;
  out << "K=" << K_.describe();
  if (lambda_) {
    out << " C=" << *lambda_ << "*K";
  } else {
    out << " C=" << C_.describe();
  }
  return out.str();
}

namespace detail {

UnitGaussRule unit_gauss_rule(int q) {
  // Nodes and weights on [-1, 1].
  std::vector<double> x, w;
  switch (q) {
    case 1: x = {0.0}; w = {2.0}; break;
    case 2: x = {-0.5773502691896257, 0.5773502691896257}; w = {1.0, 1.0}; break;
    case 3:
      x = {-0.7745966692414834, 0.0, 0.7745966692414834};
      w = {0.5555555555555556, 0.8888888888888888, 0.5555555555555556};
      break;
    case 4:
      x = {-0.8611363115940526, -0.3399810435848563, 0.3399810435848563, 0.8611363115940526};
      w = {0.3478548451374538, 0.6521451548625461, 0.6521451548625461, 0.3478548451374538};
      break;
    case 5:
      x = {-0.9061798459386640, -0.5384693101056831, 0.0, 0.5384693101056831, 0.9061798459386640};
      w = {0.2369268850561891, 0.4786286704993665, 0.5688888888888889, 0.4786286704993665,
           0.2369268850561891};
      break;
    default: throw std::domain_error("kernel: quad_points must be in 1..5");
  }
  UnitGaussRule rule;
  for (std::size_t k = 0; k < x.size(); ++k) {
    rule.nodes.push_back(0.5 * (x[k] + 1.0));
    rule.weights.push_back(0.5 * w[k]);
  }
  return rule;
}

}  // namespace detail

HypothesisReport probe_hypotheses(const KernelSpec& spec, double R, double y_probe_max, int samples) {
  if (R < 1.0 || !(y_probe_max > R) || samples < 8) {
    throw std::domain_error("probe: need R >= 1, y_probe_max > R, samples >= 8");
  }
  HypothesisReport report;
  report.R = R;
  report.y_probe_max = y_probe_max;
  report.samples = samples;

  std::vector<double> xs(samples), ys(samples);
  for (int k = 0; k < samples; ++k) {
    xs[k] = R * k / (samples - 1);
    ys[k] = R * std::pow(y_probe_max / R, double(k) / (samples - 1));
  }

  for (double x : xs) {
    for (double y : ys) {
      const double kxy = spec.K(x, y), cxy = spec.C(x, y);
      report.symmetric_K = report.symmetric_K && kxy == spec.K(y, x);
      report.symmetric_C = report.symmetric_C && cxy == spec.C(y, x);
      report.nonneg_K = report.nonneg_K && kxy >= 0.0;
      report.nonneg_C = report.nonneg_C && cxy >= 0.0;
    }
  }

  for (double y : ys) {
    double sup = 0.0;
    for (double x : xs) sup = std::max(sup, spec.K(x, y) / y);
    report.ch1_profile.push_back({y, sup});
  }
  report.ch1_pass = report.ch1_profile.back()[1] < 0.1 * report.ch1_profile.front()[1];

  // C bounded for large second argument: compare the sup over the whole
  // probe range with the declared bound, or with 110% of the sup seen on
  // the lower half of the range when nothing is declared.
  double sup_all = 0.0, sup_lower = 0.0;
  for (int k = 0; k < samples; ++k) {
    for (double x : xs) {
      const double c = spec.C(x, ys[k]);
      sup_all = std::max(sup_all, c);
      if (k < samples / 2) sup_lower = std::max(sup_lower, c);
    }
  }
  report.ch2_sup = sup_all;
  if (spec.bounds.m_cal) {
    report.m_cal = *spec.bounds.m_cal;
    report.m_cal_declared = true;
  } else {
    report.m_cal = std::max(1.0, 1.1 * sup_lower);
  }
  report.ch2_pass = std::isfinite(sup_all) && sup_all <= report.m_cal;

  double min_dk = INFINITY, min_dc = INFINITY;
  for (double x : xs) {
    const double h = 1e-6 * std::max(1.0, x);
    for (double y : ys) {
      min_dk = std::min(min_dk, (spec.K(x + h, y) - spec.K(x, y)) / h);
      min_dc = std::min(min_dc, (spec.C(x + h, y) - spec.C(x, y)) / h);
    }
  }
  report.min_dK_dx = min_dk;
  report.min_dC_dx = min_dc;
  constexpr double fd_slack = 1e-6;
  if (spec.bounds.alpha) report.alpha_pass = min_dk >= -*spec.bounds.alpha - fd_slack;
  if (spec.bounds.beta) report.beta_pass = min_dc >= -*spec.bounds.beta - fd_slack;
  return report;
}

}  // namespace dca

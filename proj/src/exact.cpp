#include "dca/exact.hpp"

#include <cmath>
#include <stdexcept>

namespace dca {

std::string_view to_string(CaseId id) {
  switch (id) {
    case CaseId::case1: return "case1";
    case CaseId::case2: return "case2";
    case CaseId::case3: return "case3";
  }
  return "unknown";
}

std::optional<CaseId> parse_case(std::string_view name) {
  if (name == "case1") return CaseId::case1;
  if (name == "case2") return CaseId::case2;
  if (name == "case3") return CaseId::case3;
  return std::nullopt;
}

void ExactCase::validate() const {
  if (!(M > 0.0)) throw std::domain_error("case: M must be positive");
  if (!(lambda >= 0.0 && lambda <= 1.0)) throw std::domain_error("case: lambda must lie in [0, 1]");
}

InitialProfile initial_profile(const ExactCase& c) {
  c.validate();
  if (c.id == CaseId::case3) {
    const double M = c.M;
    return {"box", [M](double x) { return (x >= 0.0 && x <= M) ? 2.0 / M : 0.0; }, {M}};
  }
  return {"x_exp", [](double x) { return x * std::exp(-x); }, {}};
}

KernelSpec case_kernel(const ExactCase& c) {
  c.validate();
  const KernelFunction unit{KernelFamily::constant, 1.0};
  switch (c.id) {
    case CaseId::case1: return KernelSpec::scaled(unit, 1.0);
    case CaseId::case2: return KernelSpec::scaled(unit, c.lambda);
    case CaseId::case3: return KernelSpec::scaled(unit, 0.0);
  }
  throw std::logic_error("unreachable");
}

bool has_closed_form(const ExactCase& c) {
  return c.id != CaseId::case2 || c.lambda == 1.0;
}

std::optional<double> exact_solution(const ExactCase& c, double t, double x) {
  if (t < 0.0 || x < 0.0) throw std::domain_error("exact: negative time or size");
  if (!has_closed_form(c)) return std::nullopt;
  if (c.id == CaseId::case3) {
    const double s = 1.0 + t;
    return (x / s <= c.M) ? 2.0 / (c.M * s * s) : 0.0;
  }
  const double u = x - 2.0 * t;
  return u > 0.0 ? u * std::exp(-u) / (1.0 + t) : 0.0;
}

std::vector<double> exact_breakpoints(const ExactCase& c, double t) {
  if (c.id == CaseId::case3) return {c.M * (1.0 + t)};
  return {2.0 * t};
}

}  // namespace dca

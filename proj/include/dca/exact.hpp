#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include "dca/kernel.hpp"
#include "dca/state.hpp"

namespace dca {

enum class CaseId { case1, case2, case3 };

std::string_view to_string(CaseId id);
std::optional<CaseId> parse_case(std::string_view name);

/// Reference problems with closed-form data.
///
///  case1: K = C = 1, f(0,x) = x e^{-x}
///  case2: K = 1, C = lambda K, f(0,x) = x e^{-x}
///  case3: K = 1, C = 0, f(0,x) = (2/M) 1_[0,M](x)
struct ExactCase {
  CaseId id = CaseId::case1;
  double M = 3.0;
  double lambda = 1.0;

  void validate() const;
};

InitialProfile initial_profile(const ExactCase& c);

/// The kernel pair the case is posed with.
KernelSpec case_kernel(const ExactCase& c);

bool has_closed_form(const ExactCase& c);

/// f(t, x), or nothing when the case has no closed form.
///
/// For K = C = 1 the equation reduces to f_t + M1 f_x = -M0(t) f, with the
/// mass M1 = 2 conserved and the number M0 = 1/(1+t), so
///   f(t,x) = (x - 2t) e^{-(x - 2t)} / (1 + t)   for x > 2t, 0 otherwise.
/// For the pure OHS case with the box profile,
///   f(t,x) = 2 / (M (1+t)^2) 1_[0,M](x / (1+t)).
std::optional<double> exact_solution(const ExactCase& c, double t, double x);

/// Points where f(t, .) jumps or has a kink.
std::vector<double> exact_breakpoints(const ExactCase& c, double t);

}  // namespace dca

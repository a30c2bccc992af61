#pragma once

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "dca/exact.hpp"
#include "dca/integrator.hpp"
#include "dca/kernel.hpp"

namespace dca {

class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& what, int line = 0, std::string key = {})
      : std::runtime_error(format(what, line, key)), line_(line), key_(std::move(key)) {}
  int line() const noexcept { return line_; }
  const std::string& key() const noexcept { return key_; }

 private:
  static std::string format(const std::string& what, int line, const std::string& key);
  int line_;
  std::string key_;
};

/// Kernel block of a run configuration; unset entries fall back to the case.
struct KernelBlock {
  std::optional<KernelFamily> K;
  std::optional<double> L;  // scale of K
  std::optional<double> lambda;
  std::optional<KernelFamily> C;
  std::optional<double> C_scale;
  DiscretizationRule rule = DiscretizationRule::point;
  int quad_points = 3;
  bool force_dense = false;
  DeclaredBounds bounds;
};

struct RunConfig {
  /// case1 | case2 | case3 | custom
  std::string case_name = "case1";
  double epsilon = 0.05;
  std::vector<double> epsilon_list = {0.05, 0.01, 0.005};
  double x_max = 10.0;
  double t_max = 2.5;
  std::vector<double> snapshot_times = {1.0, 2.5};
  /// Uniformly spaced extra moment samples on (0, t_max].
  int moment_samples = 25;
  double M = 3.0;
  /// Single lambda for case2; when empty, case2 runs every lambda_list entry.
  std::optional<double> lambda;
  std::vector<double> lambda_list = {0.0, 0.5, 0.75, 1.0};
  /// Named initial profile for the custom case: x_exp | box | exp.
  std::string initial = "x_exp";
  KernelBlock kernel;
  IntegratorConfig integrator;
  int projection_panels = 16;
  int error_panels = 8;
  /// Upper end of the error integral; defaults to x_max.
  std::optional<double> measure_max;
  std::filesystem::path output_dir = "out";
  int threads = 1;

  std::optional<CaseId> case_id() const { return parse_case(case_name); }
  /// The exact-case description, with lambda for case2.
  ExactCase exact_case(double lambda_value = 1.0) const;

  void validate() const;
};

/// Apply one `key = value` assignment. `line` is used in error messages.
void apply_setting(RunConfig& cfg, const std::string& key, const std::string& value, int line = 0);

/// Parse a key/value file: one `key = value` per line, `#` starts a comment,
/// dotted keys address blocks (kernel.K, integrator.rtol).
RunConfig parse_config(const std::string& text, RunConfig base = {});
RunConfig load_config(const std::filesystem::path& path, RunConfig base = {});

/// Kernel pair for a run, from the case defaults and the kernel block.
KernelSpec resolve_kernel(const RunConfig& cfg, std::optional<double> lambda = std::nullopt);

/// Initial profile for a run.
InitialProfile resolve_initial(const RunConfig& cfg);

}  // namespace dca

#include "dca/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace dca {

std::string ConfigError::format(const std::string& what, int line, const std::string& key) {
  std::string out = "config";
  if (line > 0) out += " line " + std::to_string(line);
  if (!key.empty()) out += " [" + key + "]";
  return out + ": " + what;
}

namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

double to_double(const std::string& value, int line, const std::string& key) {
  const std::string v = trim(value);
  double out = 0.0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size() || v.empty()) {
    throw ConfigError("expected a number, got '" + v + "'", line, key);
  }
  return out;
}

long to_long(const std::string& value, int line, const std::string& key) {
  const double d = to_double(value, line, key);
  if (d != std::floor(d)) throw ConfigError("expected an integer, got '" + trim(value) + "'", line, key);
  return static_cast<long>(d);
}

std::vector<double> to_list(const std::string& value, int line, const std::string& key) {
  std::string v = trim(value);
  if (!v.empty() && v.front() == '[') v.erase(v.begin());
  if (!v.empty() && v.back() == ']') v.pop_back();
  std::vector<double> out;
  std::stringstream in(v);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (trim(item).empty()) continue;
    out.push_back(to_double(item, line, key));
  }
  return out;
}

KernelFamily to_family(const std::string& value, int line, const std::string& key) {
  const auto family = parse_kernel_family(trim(value));
  if (!family) throw ConfigError("unknown kernel '" + trim(value) + "' (constant|product|sum)", line, key);
  return *family;
}

bool to_bool(const std::string& value, int line, const std::string& key) {
  const std::string v = trim(value);
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ConfigError("expected true or false, got '" + v + "'", line, key);
}

}  // namespace

ExactCase RunConfig::exact_case(double lambda_value) const {
  const auto id = case_id();
  if (!id) throw ConfigError("case '" + case_name + "' has no exact description", 0, "case");
  return ExactCase{*id, M, lambda_value};
}

void apply_setting(RunConfig& cfg, const std::string& raw_key, const std::string& value, int line) {
  const std::string key = trim(raw_key);
  auto num = [&] { return to_double(value, line, key); };
  auto& k = cfg.kernel;
  auto& integ = cfg.integrator;

  if (key == "case") cfg.case_name = trim(value);
  else if (key == "epsilon") cfg.epsilon = num();
  else if (key == "epsilon_list") cfg.epsilon_list = to_list(value, line, key);
  else if (key == "x_max") cfg.x_max = num();
  else if (key == "t_max") cfg.t_max = num();
  else if (key == "snapshot_times") cfg.snapshot_times = to_list(value, line, key);
  else if (key == "moment_samples") cfg.moment_samples = int(to_long(value, line, key));
  else if (key == "M") cfg.M = num();
  else if (key == "lambda") cfg.lambda = num();
  else if (key == "lambda_list") cfg.lambda_list = to_list(value, line, key);
  else if (key == "initial") cfg.initial = trim(value);
  else if (key == "output_dir") cfg.output_dir = trim(value);
  else if (key == "threads") cfg.threads = int(to_long(value, line, key));
  else if (key == "projection.panels") cfg.projection_panels = int(to_long(value, line, key));
  else if (key == "error.measure_max") cfg.measure_max = num();
  else if (key == "error.panels") cfg.error_panels = int(to_long(value, line, key));
  else if (key == "kernel.K") k.K = to_family(value, line, key);
  else if (key == "kernel.L") k.L = num();
  else if (key == "kernel.lambda") k.lambda = num();
  else if (key == "kernel.C") k.C = to_family(value, line, key);
  else if (key == "kernel.C_scale") k.C_scale = num();
  else if (key == "kernel.rule") {
    const std::string v = trim(value);
    if (v == "point") k.rule = DiscretizationRule::point;
    else if (v == "cell_average") k.rule = DiscretizationRule::cell_average;
    else throw ConfigError("unknown rule '" + v + "' (point|cell_average)", line, key);
  }
  else if (key == "kernel.quad_points") k.quad_points = int(to_long(value, line, key));
  else if (key == "kernel.dense") k.force_dense = to_bool(value, line, key);
  else if (key == "kernel.alpha") k.bounds.alpha = num();
  else if (key == "kernel.beta") k.bounds.beta = num();
  else if (key == "kernel.M_cal") k.bounds.m_cal = num();
  else if (key == "kernel.A1") k.bounds.A1 = num();
  else if (key == "kernel.A2") k.bounds.A2 = num();
  else if (key == "kernel.K1") k.bounds.K1 = num();
  else if (key == "kernel.K2") k.bounds.K2 = num();
  else if (key == "integrator.rtol") integ.rtol = num();
  else if (key == "integrator.atol") integ.atol = num();
  else if (key == "integrator.h_init") integ.h_init = num();
  else if (key == "integrator.h_max") integ.h_max = num();
  else if (key == "integrator.safety") integ.safety = num();
  else if (key == "integrator.max_steps") integ.max_steps = to_long(value, line, key);
  else if (key == "integrator.negativity_policy") {
    const std::string v = trim(value);
    if (v == "clamp_tiny") integ.negativity_policy = NegativityPolicy::clamp_tiny;
    else if (v == "reject") integ.negativity_policy = NegativityPolicy::reject;
    else throw ConfigError("unknown policy '" + v + "' (clamp_tiny|reject)", line, key);
  }
  else throw ConfigError("unknown key", line, key);
}

RunConfig parse_config(const std::string& text, RunConfig base) {
  std::istringstream in(text);
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const auto hash = raw.find('#');
    const std::string body = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos) throw ConfigError("expected 'key = value'", line, body);
    apply_setting(base, body.substr(0, eq), body.substr(eq + 1), line);
  }
  return base;
}

RunConfig load_config(const std::filesystem::path& path, RunConfig base) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open '" + path.string() + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str(), std::move(base));
}

void RunConfig::validate() const {
  const bool known = case_id().has_value() || case_name == "custom";
  if (!known) throw ConfigError("unknown case '" + case_name + "' (case1|case2|case3|custom)", 0, "case");
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw ConfigError("epsilon must lie in (0, 1)", 0, "epsilon");
  for (std::size_t k = 0; k < epsilon_list.size(); ++k) {
    if (!(epsilon_list[k] > 0.0 && epsilon_list[k] < 1.0)) {
      throw ConfigError("epsilon_list values must lie in (0, 1)", 0, "epsilon_list");
    }
    if (k > 0 && !(epsilon_list[k] < epsilon_list[k - 1])) {
      throw ConfigError("epsilon_list must be strictly decreasing", 0, "epsilon_list");
    }
  }
  if (!(x_max > 0.0)) throw ConfigError("x_max must be positive", 0, "x_max");
  if (!(t_max > 0.0)) throw ConfigError("t_max must be positive", 0, "t_max");
  for (std::size_t k = 0; k < snapshot_times.size(); ++k) {
    if (!(snapshot_times[k] >= 0.0 && snapshot_times[k] <= t_max)) {
      throw ConfigError("snapshot times must lie in [0, t_max]", 0, "snapshot_times");
    }
    if (k > 0 && !(snapshot_times[k] > snapshot_times[k - 1])) {
      throw ConfigError("snapshot times must be strictly increasing", 0, "snapshot_times");
    }
  }
  if (moment_samples < 0) throw ConfigError("moment_samples must be nonnegative", 0, "moment_samples");
  if (!(M > 0.0)) throw ConfigError("M must be positive", 0, "M");
  auto check_lambda = [](double l, const char* key) {
    if (!(l >= 0.0 && l <= 1.0)) throw ConfigError("lambda must lie in [0, 1]", 0, key);
  };
  if (lambda) check_lambda(*lambda, "lambda");
  for (double l : lambda_list) check_lambda(l, "lambda_list");
  if (kernel.lambda) check_lambda(*kernel.lambda, "kernel.lambda");
  if (kernel.quad_points < 1 || kernel.quad_points > 5) {
    throw ConfigError("quad_points must be in 1..5", 0, "kernel.quad_points");
  }
  if (initial != "x_exp" && initial != "box" && initial != "exp") {
    throw ConfigError("unknown initial profile '" + initial + "' (x_exp|box|exp)", 0, "initial");
  }
  if (projection_panels < 1) throw ConfigError("panels must be positive", 0, "projection.panels");
  if (error_panels < 1) throw ConfigError("panels must be positive", 0, "error.panels");
  if (measure_max && !(*measure_max > 0.0)) throw ConfigError("measure_max must be positive", 0, "error.measure_max");
  if (threads < 1) throw ConfigError("threads must be positive", 0, "threads");
  try {
    integrator.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what(), 0, "integrator");
  }
}

KernelSpec resolve_kernel(const RunConfig& cfg, std::optional<double> lambda) {
  const auto id = cfg.case_id();
  const KernelBlock& k = cfg.kernel;

  KernelSpec base = id ? case_kernel(cfg.exact_case(lambda.value_or(cfg.lambda.value_or(1.0))))
                       : KernelSpec::scaled({KernelFamily::constant, 1.0}, 1.0);
  KernelFunction K = base.aggregation();
  if (k.K) K.family = *k.K;
  if (k.L) K.scale = *k.L;

  KernelSpec spec;
  if (k.C) {
    KernelFunction C{*k.C, k.C_scale.value_or(1.0)};
    spec = KernelSpec::independent(K, C);
  } else {
    double lam = base.lambda().value_or(1.0);
    if (k.lambda) lam = *k.lambda;
    if (lambda) lam = *lambda;
    spec = KernelSpec::scaled(K, lam);
  }
  spec.bounds = k.bounds;
  return spec;
}

InitialProfile resolve_initial(const RunConfig& cfg) {
  if (const auto id = cfg.case_id()) return initial_profile(cfg.exact_case(cfg.lambda.value_or(1.0)));
  if (cfg.initial == "box") return initial_profile(ExactCase{CaseId::case3, cfg.M, 0.0});
  if (cfg.initial == "exp") return {"exp", [](double x) { return std::exp(-x); }, {}};
  return initial_profile(ExactCase{CaseId::case1, cfg.M, 1.0});
}

}  // namespace dca

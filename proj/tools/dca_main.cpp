#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "dca/commands.hpp"
#include "dca/config.hpp"
#include "validate.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Discrete condensing-aggregation solver"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path;
  std::optional<double> epsilon, lambda, rtol, atol;
  std::optional<std::string> case_name, out_dir;
  std::optional<int> threads;
  std::vector<std::string> settings;
  app.add_option("--config", config_path, "key = value configuration file")->check(CLI::ExistingFile);
  app.add_option("--epsilon", epsilon, "cell width (simulate) or single-entry override");
  app.add_option("--case", case_name, "case1 | case2 | case3 | custom");
  app.add_option("--lambda", lambda, "inverse-aggregation ratio C = lambda K");
  app.add_option("--out", out_dir, "output directory");
  app.add_option("--rtol", rtol, "integrator relative tolerance");
  app.add_option("--atol", atol, "integrator absolute tolerance");
  app.add_option("--threads", threads, "sweep worker count");
  app.add_option("--set", settings, "extra key=value override (repeatable)");

  auto* simulate = app.add_subcommand("simulate", "one integration per epsilon (case2: per lambda)");
  auto* sweep = app.add_subcommand("sweep", "epsilon ladder and error tables");
  auto* validate = app.add_subcommand("validate", "hypothesis probes and oracle self-tests");

  CLI11_PARSE(app, argc, argv);

  dca::RunConfig cfg;
  try {
    if (!config_path.empty()) cfg = dca::load_config(config_path);
    if (case_name) cfg.case_name = *case_name;
    if (epsilon) cfg.epsilon = *epsilon;
    if (lambda) cfg.lambda = *lambda;
    if (out_dir) cfg.output_dir = *out_dir;
    if (rtol) cfg.integrator.rtol = *rtol;
    if (atol) cfg.integrator.atol = *atol;
    if (threads) cfg.threads = *threads;
    for (const auto& s : settings) {
      const auto eq = s.find('=');
      if (eq == std::string::npos) throw dca::ConfigError("expected key=value", 0, s);
      dca::apply_setting(cfg, s.substr(0, eq), s.substr(eq + 1));
    }
    cfg.validate();

    if (*simulate) return dca::cmd_simulate(cfg, std::cout);
    if (*sweep) return dca::cmd_sweep(cfg, std::cout);
    if (*validate) return dca::cmd_validate(cfg, std::cout);
  } catch (const dca::ConfigError& e) {
    std::cerr << e.what() << '\n';
    return dca::exit_config_error;
  } catch (const dca::IntegrationError& e) {
    std::cerr << e.what() << " at t=" << e.time() << '\n';
    return dca::exit_integrator_failure;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

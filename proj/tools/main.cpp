#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "cholesteric/errors.hpp"
#include "cholesteric/version.hpp"
#include "run_config.hpp"

namespace {

using chol::cli::RunConfig;

void kernel_options(CLI::App* app, RunConfig& cfg) {
  app->add_option("--kernel", cfg.kernel, "Kernel JSON file (default: built-in demo set)");
  app->add_option("--tau", cfg.tau, "Rescale HH so that 1/k0_HH = tau");
  app->add_option("--alpha", cfg.alpha, "Rescale HD so that k0_HD = alpha / tau");
  app->add_option("--rho0", cfg.rho0, "Dilution coefficient (overrides the kernel file)");
}

void descent_options(CLI::App* app, RunConfig& cfg) {
  app->add_option("--grid", cfg.grid, "Grid extent along e3 (transverse extent 4)");
  app->add_flag("--full3d", cfg.full3d, "Cubic grid with every extent equal to --grid");
  app->add_option("--seed", cfg.seed, "Seed for random initialization (splitmix64)");
  app->add_option("--starts", cfg.starts, "Random starts; the lowest final energy is kept");
  app->add_option("--max-iter", cfg.max_iterations, "Iteration cap per descent");
  app->add_option("--quad-degree", cfg.quad_degree, "Polynomial degree of the sphere rule (127: 64 x 128 nodes)");
  app->add_option("--out", cfg.out, "Output prefix");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Nonlocal Q-tensor model of dilute chiral dopants in a nematic host"};
  app.set_version_flag("--version", chol::version());
  app.require_subcommand(1);
  RunConfig cfg;
  std::string range_tau = "0.02:0.14:13", range_alpha = "0.15:2:12", config_path;

  auto* bulk = app.add_subcommand("bulk", "Homogeneous equilibria and helical twisting power");
  bulk->require_subcommand(1);
  auto* solve = bulk->add_subcommand("solve", "s0, sc and sc/s0 at one (tau, alpha)");
  solve->add_option("--tau", cfg.tau, "Host temperature parameter 1/k0_HH")->required();
  solve->add_option("--alpha", cfg.alpha, "Coupling ratio k0_HD / k0_HH")->required();
  solve->add_option("--out", cfg.out, "Manifest prefix");
  auto* map = bulk->add_subcommand("map", "sc/s0 over a tau x alpha grid");
  map->add_option("--tau", range_tau, "start:stop:count");
  map->add_option("--alpha", range_alpha, "start:stop:count");
  map->add_option("--out", cfg.out, "CSV path; the gnuplot matrix goes next to it");

  auto* frank = app.add_subcommand("frank", "Frank constants, beta and q from a kernel set");
  kernel_options(frank, cfg);
  frank->add_option("--out", cfg.out, "Manifest prefix");

  auto* minimize = app.add_subcommand("minimize", "Descend the discrete energy from an initial field");
  kernel_options(minimize, cfg);
  descent_options(minimize, cfg);
  minimize->add_option("--eps", cfg.eps, "Length-scale ratio");
  minimize->add_option("--init", cfg.init, "random | constant | helix:M");
  minimize->add_option("--gradient-tol", cfg.gradient_tol, "Sup norm of the preconditioned gradient");
  minimize->add_option("--method", cfg.method, "lbfgs | gd");

  auto* gamma = app.add_subcommand("gamma", "Recovery-sequence gaps between F_eps and the limit energy");
  kernel_options(gamma, cfg);
  descent_options(gamma, cfg);
  gamma->add_option("--eps", cfg.eps_list, "Comma-separated eps values")->delimiter(',');
  gamma->add_flag("--minimize", cfg.run_minimizer, "Also descend from random starts at each eps");

  auto* validate = app.add_subcommand("validate-kernels", "Sample the pointwise kernel bounds");
  kernel_options(validate, cfg);

  auto* run = app.add_subcommand("run", "Execute a JSON run configuration");
  run->add_option("config", config_path, "Run configuration file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return chol::cli::kConfigError;
  }

  try {
    if (run->parsed()) {
      std::ifstream f(config_path);
      if (!f) throw chol::ConfigError("config", "cannot open " + config_path);
      nlohmann::json j;
      try {
        f >> j;
      } catch (const nlohmann::json::exception& e) {
        throw chol::ConfigError("config", std::string("malformed JSON: ") + e.what());
      }
      cfg = chol::cli::parse_run_config(j);
    } else if (solve->parsed()) {
      cfg.command = "bulk-solve";
    } else if (map->parsed()) {
      cfg.command = "bulk-map";
      cfg.tau_range = chol::cli::parse_range(range_tau, "tau");
      cfg.alpha_range = chol::cli::parse_range(range_alpha, "alpha");
    } else if (frank->parsed()) {
      cfg.command = "frank";
    } else if (minimize->parsed()) {
      cfg.command = "minimize";
    } else if (gamma->parsed()) {
      cfg.command = "gamma";
    } else {
      cfg.command = "validate-kernels";
    }
  } catch (const chol::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return chol::cli::kConfigError;
  }
  return chol::cli::run(cfg, std::cout, std::cerr);
}

#include <iostream>

#include "CLI11.hpp"
#include "commands.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Nonlocal quasilinear Neumann/Robin solver and verification harness"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  std::string suite = "all";

  auto* solve = app.add_subcommand("solve", "solve the configured problem");
  solve->add_option("--config", config_path, "run configuration")->required();
  solve->add_option("--out", out_dir, "output directory (overrides [output] dir)");

  auto* verify = app.add_subcommand("verify", "run a property suite");
  verify->add_option("--suite", suite, "extension | convolution | hypotheses | moser | all")
      ->check(CLI::IsMember({"extension", "convolution", "hypotheses", "moser", "all"}));
  verify->add_option("--config", config_path, "run configuration (defaults otherwise)");

  auto* mms = app.add_subcommand("mms", "manufactured-solution convergence study");
  mms->add_option("--config", config_path, "run configuration (defaults otherwise)");
  mms->add_option("--out", out_dir, "also write mms.csv and mms.json here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : nlq::cli::kExitConfig;
  }

  nlq::RunConfig cfg;
  try {
    if (!config_path.empty()) cfg = nlq::load_config(config_path);
  } catch (const nlq::ConfigError& e) {
    std::cerr << "config error: " << config_path << ": " << e.what() << '\n';
    return nlq::cli::kExitConfig;
  }

  try {
    if (*solve) return nlq::cli::cmd_solve(cfg, out_dir.empty() ? cfg.output_dir : out_dir, std::cerr);
    if (*verify) return nlq::cli::cmd_verify(cfg, suite, std::cout, std::cerr);
    return nlq::cli::cmd_mms(cfg, out_dir, std::cout, std::cerr);
  } catch (const nlq::ConfigError& e) {
    std::cerr << "config error: " << (config_path.empty() ? "<defaults>" : config_path) << ": " << e.what() << '\n';
    return nlq::cli::kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return nlq::cli::kExitNotConverged;
  }
}

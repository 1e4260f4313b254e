#include <CLI11.hpp>

#include <cstdint>
#include <iostream>

#include "tjsim/runner.hpp"

int main(int argc, char** argv) {
  CLI::App app{"exact-diagonalization twin of a frustrated bosonic t-J simulator"};
  app.require_subcommand(1);

  tjs::run::RunOptions options;
  std::string config_path, out_dir = "out";
  std::int64_t seed_override = -1;

  const auto add_common = [&](CLI::App* cmd, bool needs_config) {
    auto* config_opt = cmd->add_option("--config", config_path, "run configuration (JSON)");
    if (needs_config) config_opt->required();
    cmd->add_option("--out", out_dir, "output directory");
    cmd->add_option("--threads", options.threads, "worker threads for sweeps and shot batches");
    cmd->add_option("--seed-override", seed_override, "replace every configured seed");
    cmd->add_flag("--force", options.force, "overwrite results of a different config");
  };

  for (const char* name : {"ground", "ramp", "measure", "reconstruct", "fit-init"})
    add_common(app.add_subcommand(name), true);
  add_common(app.add_subcommand("toycheck", "analytic plaquette checks"), false);

  CLI11_PARSE(app, argc, argv);

  options.config_path = config_path;
  options.out_dir = out_dir;
  if (seed_override >= 0) options.seed_override = static_cast<std::uint64_t>(seed_override);

  try {
    return tjs::run::dispatch(app.get_subcommands().front()->get_name(), options, std::cout);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}

// helixseek: simulate, sweep and analyze helical chemotaxis runs.

#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"

#include "helixseek/commands.hpp"

int main(int argc, char** argv) {
  using namespace helixseek;

  CLI::App app{"Helical chemotaxis swimmer: closed-loop simulation and averaging checks"};
  app.set_version_flag("--version", std::string(version()));
  app.require_subcommand(1);

  std::string config, out_dir, sweep_spec, trajectory, kind;
  unsigned parallelism = 1;
  std::optional<std::uint64_t> seed;
  bool planar = false, flip = false;

  auto* simulate = app.add_subcommand("simulate", "Run one configuration");
  simulate->add_option("--config", config, "Config JSON")->required()->check(CLI::ExistingFile);
  simulate->add_option("--out", out_dir, "Output directory")->required();
  simulate->add_option("--seed", seed, "Noise seed (overrides config)");

  auto* sweep = app.add_subcommand("sweep", "Run a parameter grid");
  sweep->add_option("--config", config, "Base config JSON")->required()->check(CLI::ExistingFile);
  sweep->add_option("--grid", sweep_spec, "Sweep spec JSON")->required()->check(CLI::ExistingFile);
  sweep->add_option("--out", out_dir, "Output directory")->required();
  sweep->add_option("--parallelism", parallelism, "Worker threads")->check(CLI::PositiveNumber);
  sweep->add_option("--seed", seed, "Noise seed (overrides config)");

  auto* analyze = app.add_subcommand("analyze", "Analyze a trajectory CSV");
  analyze->add_option("--trajectory", trajectory, "trajectory.csv")->required();
  analyze->add_option("--config", config, "Config the trajectory was run with")
      ->required()
      ->check(CLI::ExistingFile);
  analyze->add_option("--kind", kind, "ascent | alignment | quasi-steady")
      ->required()
      ->check(CLI::IsMember({"ascent", "alignment", "quasi-steady"}));
  analyze->add_option("--out", out_dir, "Output directory")->required();

  auto* fig2 = app.add_subcommand("reproduce-fig2", "Run the radial-field reproduction scenario");
  fig2->add_option("--out", out_dir, "Output directory")->required();
  fig2->add_option("--config", config, "Override the built-in scenario")->check(CLI::ExistingFile);
  fig2->add_flag("--planar", planar, "Zero the out-of-plane rotation rates");
  fig2->add_flag("--flip-omega-perp-1", flip, "Negate omega_perp_1");
  fig2->add_option("--seed", seed, "Noise seed (overrides config)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUserError;
  }

  if (*simulate) return cmd_simulate({config, out_dir, seed}, std::cout, std::cerr);
  if (*sweep) {
    return cmd_sweep({config, sweep_spec, out_dir, parallelism, seed}, std::cout, std::cerr);
  }
  if (*analyze) return cmd_analyze({trajectory, config, kind, out_dir}, std::cout, std::cerr);
  Fig2Options opts;
  opts.out_dir = out_dir;
  if (!config.empty()) opts.config = config;
  opts.planar = planar;
  opts.flip_omega_perp_1 = flip;
  opts.seed = seed;
  return cmd_reproduce_fig2(opts, std::cout, std::cerr);
}

#include <cstdint>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "disg/experiment.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Dynamic information sharing game: belief filtering, best-response solving,\n"
               "equilibrium regions and simulation"};
  app.require_subcommand(1);

  disg::RunOptions options;
  std::string config_path;
  std::string out_dir = "out";
  std::uint64_t seed = 0;
  int grid = 0;

  const char* commands[] = {"validate", "solve", "bound", "simulate", "finite-check", "sweep",
                            "plot"};
  const char* descriptions[] = {
      "check the model invariants and report violations",
      "run the iterative refinement algorithm and write the region",
      "compute the absorbing box, r_inf and the suggested cost",
      "simulate the solved CGT profile and write the trajectory",
      "finite-horizon brute-force no-cooperation check",
      "repeat solve over the configured (cost, p1, p2) entries",
      "render the solved region(s) as an SVG band chart",
  };
  for (std::size_t i = 0; i < std::size(commands); ++i) {
    CLI::App* sub = app.add_subcommand(commands[i], descriptions[i]);
    sub->add_option("--config", config_path, "experiment config JSON")->required();
    sub->add_option("--out", out_dir, "output directory (default: out)");
    sub->add_option("--seed", seed, "override the configured simulation seed");
    sub->add_option("--grid", grid, "override the configured grid resolution");
  }

  CLI11_PARSE(app, argc, argv);

  CLI::App* sub = app.get_subcommands().front();
  options.config_path = config_path;
  options.out_dir = out_dir;
  if (sub->count("--seed") > 0) options.seed_override = seed;
  if (sub->count("--grid") > 0) options.grid_override = grid;

  return disg::run_command(sub->get_name(), options, std::cout, std::cerr);
}

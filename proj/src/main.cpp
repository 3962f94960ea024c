#include <CLI11.hpp>
#include <cstdio>
#include <map>

#include "equidesign/commands.hpp"

using namespace equidesign;

namespace {

struct CliOverrides {
  std::string config_path;
  std::string output_dir;
  std::vector<int> grid;
  double alpha = 0.0;
  double tol = 0.0;
  int max_iters = 0;
  CLI::Option* output_dir_opt = nullptr;
  CLI::Option* grid_opt = nullptr;
  CLI::Option* alpha_opt = nullptr;
  CLI::Option* tol_opt = nullptr;
  CLI::Option* max_iters_opt = nullptr;
};

void add_common_options(CLI::App* sub, CliOverrides& o) {
  sub->add_option("--config", o.config_path,
                  "JSON config (or a report JSON with an embedded config)")
      ->required();
  o.output_dir_opt = sub->add_option("--output-dir", o.output_dir, "Directory for emitted files");
  o.grid_opt = sub->add_option("--grid", o.grid, "Grid sizes N M")->expected(2);
  o.alpha_opt = sub->add_option("--alpha", o.alpha, "Regularization weight");
  o.tol_opt = sub->add_option("--tol", o.tol, "Optimizer tolerance on the H1 update norm");
  o.max_iters_opt = sub->add_option("--max-iters", o.max_iters, "Iteration cap");
}

// Flag values override whatever the config file says; the merged result is
// the effective config embedded in every report.
RunConfig resolve(const CliOverrides& o) {
  RunConfig cfg = load_config(o.config_path);
  if (o.output_dir_opt->count()) cfg.output_dir = o.output_dir;
  if (o.grid_opt->count()) {
    cfg.n_phi = o.grid[0];
    cfg.n_radial = o.grid[1];
  }
  if (o.alpha_opt->count()) cfg.optimize.alpha = o.alpha;
  if (o.tol_opt->count()) cfg.optimize.tol = o.tol;
  if (o.max_iters_opt->count()) cfg.optimize.k_max = o.max_iters;
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Equilibrium-density design workbench for the unit disk"};
  app.require_subcommand(1);

  std::map<CLI::App*, CliOverrides> overrides;
  auto* fwd = app.add_subcommand("forward", "Solve the equilibrium for a fixed control");
  auto* opt = app.add_subcommand("optimize", "Run the NCG design loop");
  auto* grc = app.add_subcommand("gradcheck", "Finite-difference check of the adjoint gradient");
  auto* val = app.add_subcommand("validate", "Run the discretization and solver oracles");
  for (auto* sub : {fwd, opt, grc, val}) add_common_options(sub, overrides[sub]);

  CLI11_PARSE(app, argc, argv);

  try {
    CLI::App* active = app.get_subcommands().front();
    RunConfig cfg = resolve(overrides.at(active));
    if (active == fwd) return cmd_forward(cfg);
    if (active == opt) return cmd_optimize(cfg);
    if (active == grc) return cmd_gradcheck(cfg);
    return cmd_validate(cfg);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}

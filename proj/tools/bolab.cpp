#include <iostream>
#include <optional>
#include <string>
#include <thread>

#include <CLI11.hpp>

#include "bolab/cli.hpp"

int main(int argc, char** argv) {
  namespace cli = bolab::cli;

  CLI::App app{"Benjamin-Ono / Benjamin-Ono-Burgers pseudo-spectral lab"};
  app.set_version_flag("--version", cli::kToolVersion);
  app.require_subcommand(1);

  std::string config;
  std::optional<std::string> out;
  unsigned workers = std::max(1u, std::thread::hardware_concurrency());
  unsigned seed = 0;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config, "flat JSON config, or a manifest.json from a prior run")
        ->required();
    sub->add_option("--out", out, "output directory (BOLAB_OUT overrides)");
    sub->add_option("--workers", workers, "parallel sweep members")->check(CLI::PositiveNumber);
    sub->add_option("--seed", seed, "seed for randomized property audits");
  };
  auto* simulate = app.add_subcommand("simulate", "integrate one configuration");
  auto* sweep = app.add_subcommand("sweep", "epsilon sweep against the eps = 0 reference");
  auto* invariants = app.add_subcommand("invariants", "check the dissipation identities");
  auto* mms = app.add_subcommand("mms", "manufactured-solution accuracy and temporal order");
  for (auto* sub : {simulate, sweep, invariants, mms}) add_common(sub);

  std::string csv_path, svg_path;
  auto* plot = app.add_subcommand("plot", "log-log SVG of a sweep CSV");
  plot->add_option("sweep_csv", csv_path)->required();
  plot->add_option("out_svg", svg_path)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : cli::kConfigError;
  }

  cli::Context ctx;
  ctx.config = config;
  ctx.out_dir = cli::resolve_out_dir(out);
  ctx.workers = workers;
  ctx.seed = seed;

  if (*simulate) return cli::cmd_simulate(ctx);
  if (*sweep) return cli::cmd_sweep(ctx);
  if (*invariants) return cli::cmd_invariants(ctx);
  if (*mms) return cli::cmd_mms(ctx);
  return cli::cmd_plot(csv_path, svg_path, ctx);
}
